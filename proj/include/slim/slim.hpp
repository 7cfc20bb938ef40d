#ifndef SLIM_SLIM_HPP
#define SLIM_SLIM_HPP

#include "slim/util.hpp"
#include "slim/corpus.hpp"
#include "slim/embedding.hpp"
#include "slim/view.hpp"
#include "slim/keywords.hpp"
#include "slim/tagging.hpp"
#include "slim/compose.hpp"
#include "slim/pipeline.hpp"
#include "slim/density.hpp"
#include "slim/classify.hpp"
#include "slim/eval.hpp"
#include "slim/experiment.hpp"

#endif  // SLIM_SLIM_HPP
