#pragma once

#include "sl2z/core.hpp"
#include "sl2z/automata.hpp"
#include "sl2z/grammar.hpp"
#include "sl2z/oracle.hpp"
#include "sl2z/decision.hpp"
#include "sl2z/encoders.hpp"
#include "sl2z/problem.hpp"
