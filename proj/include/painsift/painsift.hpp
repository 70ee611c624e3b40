#pragma once

#include "painsift/balance.hpp"
#include "painsift/config.hpp"
#include "painsift/corpus.hpp"
#include "painsift/eval.hpp"
#include "painsift/features.hpp"
#include "painsift/labels.hpp"
#include "painsift/models/model.hpp"
#include "painsift/pipeline.hpp"
#include "painsift/textprep.hpp"
#include "painsift/topics.hpp"
