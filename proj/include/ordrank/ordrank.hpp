#ifndef ORDRANK_ORDRANK_HPP
#define ORDRANK_ORDRANK_HPP

#include "ordrank/data_pipeline.hpp"
#include "ordrank/errors.hpp"
#include "ordrank/experiment.hpp"
#include "ordrank/large_deviations.hpp"
#include "ordrank/link.hpp"
#include "ordrank/minimize.hpp"
#include "ordrank/model.hpp"
#include "ordrank/numeric.hpp"
#include "ordrank/parallel.hpp"
#include "ordrank/pattern.hpp"
#include "ordrank/pattern_analysis.hpp"
#include "ordrank/random.hpp"
#include "ordrank/ranking.hpp"
#include "ordrank/specs.hpp"

#endif  // ORDRANK_ORDRANK_HPP
