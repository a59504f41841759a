#pragma once

#include "mure/expr.hpp"
#include "mure/syntax.hpp"
#include "mure/nullability.hpp"
#include "mure/derivative.hpp"
#include "mure/ipd.hpp"
#include "mure/oracle.hpp"
#include "mure/pda.hpp"
#include "mure/check.hpp"
