#pragma once

#include "formcalc/chains.hpp"
#include "formcalc/domain_box.hpp"
#include "formcalc/error.hpp"
#include "formcalc/expr.hpp"
#include "formcalc/forms.hpp"
#include "formcalc/integrate.hpp"
#include "formcalc/linalg.hpp"
#include "formcalc/program.hpp"
#include "formcalc/quadrature.hpp"
#include "formcalc/reconstruct.hpp"
#include "formcalc/verify.hpp"
#include "formcalc/zero_test.hpp"
