#pragma once

#include "hyperseed/error.hpp"
#include "hyperseed/rng.hpp"
#include "hyperseed/vsa.hpp"
#include "hyperseed/hdmap.hpp"
#include "hyperseed/learning.hpp"
#include "hyperseed/encoders.hpp"
#include "hyperseed/labeling.hpp"
#include "hyperseed/harness/dataset.hpp"
#include "hyperseed/harness/fcps.hpp"
#include "hyperseed/harness/corpus.hpp"
#include "hyperseed/harness/config.hpp"
#include "hyperseed/harness/experiment.hpp"
#include "hyperseed/harness/evaluate.hpp"
#include "hyperseed/harness/svg.hpp"
#include "hyperseed/harness/model_io.hpp"
