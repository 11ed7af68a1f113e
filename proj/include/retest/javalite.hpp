#pragma once

#include "retest/javalite/analysis.hpp"
#include "retest/javalite/ast.hpp"
#include "retest/javalite/parse.hpp"
#include "retest/javalite/print.hpp"
