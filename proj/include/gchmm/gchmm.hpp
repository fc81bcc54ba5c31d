#ifndef GCHMM_GCHMM_HPP
#define GCHMM_GCHMM_HPP

#include "baselines.hpp"
#include "bench.hpp"
#include "contact_pattern.hpp"
#include "dynamic_graph.hpp"
#include "error.hpp"
#include "events.hpp"
#include "exact_oracle.hpp"
#include "gibbs.hpp"
#include "gibbs_general.hpp"
#include "heatmap.hpp"
#include "matrices.hpp"
#include "parallel.hpp"
#include "random.hpp"
#include "roc.hpp"
#include "simulate.hpp"
#include "sis_model.hpp"

#endif
