#pragma once

#include "prs/features.hpp"
#include "prs/model.hpp"

namespace prs {

// Complementary-log-log binomial regression, mu = 1 - exp(-exp(eta)), fitted
// by Newton scoring with an optional ridge penalty on the non-intercept
// coefficients.  Requires both outcome classes present and more rows than
// columns.  A singular Hessian is retried with an escalating diagonal jitter
// (recorded in train_meta); coefficients beyond config.coef_bound set the
// separation flag but are reported as-is.
FittedModel fit_cloglog(const ActionMatrix& m, const CloglogConfig& cfg = {});

}  // namespace prs
