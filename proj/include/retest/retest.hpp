#pragma once

#include "retest/adapter.hpp"
#include "retest/campaign.hpp"
#include "retest/common.hpp"
#include "retest/compile_gate.hpp"
#include "retest/corpus.hpp"
#include "retest/engine.hpp"
#include "retest/javalite.hpp"
#include "retest/llm.hpp"
#include "retest/oracles.hpp"
#include "retest/proc.hpp"
#include "retest/refactoring.hpp"
