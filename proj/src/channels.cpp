// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risnoma/channels.hpp"

#include "risnoma/errors.hpp"
#include "risnoma/special_math.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace risnoma
{

void NakagamiParams::validate() const
{
    if (!(m >= 0.5) || !std::isfinite(m))
    {
        throw DomainError("Nakagami shape m must be >= 0.5, got " + std::to_string(m));
    }
    if (!(omega > 0.0) || !std::isfinite(omega))
    {
        throw DomainError("Nakagami spread omega must be > 0, got " + std::to_string(omega));
    }
}

namespace
{

void require_gamma(double gamma)
{
    if (!(gamma >= 0.0))
    {
        throw DomainError("SNR argument must be >= 0, got " + std::to_string(gamma));
    }
}

void require_positive_mean(double gamma_bar, const char *name)
{
    if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar))
    {
        throw DomainError(std::string(name) + " must be > 0");
    }
}

} // namespace

LinkBudget make_link_budget(double tx_snr, double amp_direct, double amp_ris)
{
    if (!(tx_snr > 0.0) || amp_direct < 0.0 || amp_ris < 0.0)
    {
        throw DomainError("make_link_budget: tx_snr must be > 0 and amplitudes >= 0");
    }
    LinkBudget b;
    b.gamma_bar_c = tx_snr;
    b.gamma_bar_d = tx_snr * amp_direct * amp_direct;
    b.gamma_bar_r = tx_snr * amp_ris * amp_ris;
    b.amp_direct = amp_direct;
    return b;
}

double double_nakagami_pdf(const NakagamiParams &p1, const NakagamiParams &p2, double x)
{
    p1.validate();
    p2.validate();
    if (!(x > 0.0))
    {
        throw DomainError("double_nakagami_pdf: x must be > 0");
    }
    const double m1 = p1.m;
    const double m2 = p2.m;
    const double scale = p1.omega * p2.omega / (m1 * m2);
    const double arg = 2.0 * x / std::sqrt(scale);
    const double k = special::bessel_k(m1 - m2, arg);
    if (k == 0.0)
    {
        return 0.0;
    }
    double log_k;
    if (std::isinf(k))
    {
        // Small-argument limit K_v(z) ~ Gamma(|v|) / 2 (2/z)^|v|.
        const double v = std::fabs(m1 - m2);
        log_k = special::log_gamma(v) - std::log(2.0) + v * std::log(2.0 / arg);
    }
    else
    {
        log_k = std::log(k);
    }
    const double log_pdf = std::log(4.0) + (m1 + m2 - 1.0) * std::log(x) + log_k - special::log_gamma(m1) -
                           special::log_gamma(m2) - 0.5 * (m1 + m2) * std::log(scale);
    return std::exp(log_pdf);
}

double double_nakagami_moment(const NakagamiParams &p1, const NakagamiParams &p2, int n)
{
    p1.validate();
    p2.validate();
    if (n < 1)
    {
        throw DomainError("double_nakagami_moment: order must be >= 1");
    }
    const double h = 0.5 * n;
    double log_moment = 0.0;
    for (const NakagamiParams *p : {&p1, &p2})
    {
        log_moment += special::log_gamma(p->m + h) - special::log_gamma(p->m) + h * std::log(p->omega / p->m);
    }
    return std::exp(log_moment);
}

LaguerreFit fit_laguerre(const RisLinkParams &ris)
{
    if (ris.n_elements < 1)
    {
        throw DomainError("fit_laguerre: n_elements must be >= 1");
    }
    const double e1 = double_nakagami_moment(ris.hop_g2r, ris.hop_r2a, 1);
    const double e2 = double_nakagami_moment(ris.hop_g2r, ris.hop_r2a, 2);
    const double var = e2 - e1 * e1;
    const double n = static_cast<double>(ris.n_elements);
    LaguerreFit fit;
    fit.a = n * e1 * e1 / var;
    fit.b = var / e1;
    fit.mean_sum = n * e1;
    fit.var_sum = n * var;
    return fit;
}

double ris_snr_pdf(const LaguerreFit &fit, double gamma_bar_r, double gamma)
{
    require_positive_mean(gamma_bar_r, "gamma_bar_r");
    if (!(gamma > 0.0))
    {
        throw DomainError("ris_snr_pdf: gamma must be > 0");
    }
    const double ratio = gamma / gamma_bar_r;
    const double log_pdf = (0.5 * fit.a - 1.0) * std::log(ratio) - std::sqrt(ratio) / fit.b - std::log(2.0 * gamma_bar_r) -
                           fit.a * std::log(fit.b) - special::log_gamma(fit.a);
    return std::exp(log_pdf);
}

double ris_snr_cdf(const LaguerreFit &fit, double gamma_bar_r, double gamma)
{
    require_positive_mean(gamma_bar_r, "gamma_bar_r");
    require_gamma(gamma);
    return special::gamma_p(fit.a, std::sqrt(gamma / gamma_bar_r) / fit.b);
}

double ris_snr_cdf_q_approx_raw(const LaguerreFit &fit, double gamma_bar_r, double gamma)
{
    require_positive_mean(gamma_bar_r, "gamma_bar_r");
    require_gamma(gamma);
    const double z = (std::sqrt(gamma / gamma_bar_r) - fit.mean_sum) / std::sqrt(fit.var_sum);
    return 1.0 - special::q_function(z) / special::q_function(-std::sqrt(fit.a));
}

double ris_snr_cdf_q_approx(const LaguerreFit &fit, double gamma_bar_r, double gamma)
{
    return std::clamp(ris_snr_cdf_q_approx_raw(fit, gamma_bar_r, gamma), 0.0, 1.0);
}

double direct_snr_cdf(const NakagamiParams &p, double gamma_bar_d, double gamma)
{
    p.validate();
    require_positive_mean(gamma_bar_d, "gamma_bar_d");
    require_gamma(gamma);
    return special::gamma_p(p.m, p.m * gamma / (p.omega * gamma_bar_d));
}

double direct_snr_pdf(const NakagamiParams &p, double gamma_bar_d, double gamma)
{
    p.validate();
    require_positive_mean(gamma_bar_d, "gamma_bar_d");
    if (!(gamma > 0.0))
    {
        throw DomainError("direct_snr_pdf: gamma must be > 0");
    }
    const double ratio = gamma / gamma_bar_d;
    const double log_pdf = p.m * std::log(p.m) + (p.m - 1.0) * std::log(ratio) - p.m * ratio / p.omega -
                           std::log(gamma_bar_d) - p.m * std::log(p.omega) - special::log_gamma(p.m);
    return std::exp(log_pdf);
}

namespace
{

// Both composite evaluations work in amplitudes normalized by amp_d sqrt(Omega3):
// the direct term becomes Nakagami(m3, 1), the RIS term r * S with
// r = sqrt(gbar_r / (gbar_d Omega3)), and the threshold s = sqrt(gamma / (gbar_d Omega3)).
struct NormalizedComposite
{
    double s = 0.0;
    double r = 0.0;
    double m3 = 1.0;
    LaguerreFit fit;
};

NormalizedComposite normalize(const RisLinkParams &ris, const NakagamiParams &direct, const LinkBudget &budget,
                              double gamma)
{
    NormalizedComposite n;
    const double unit = budget.gamma_bar_d * direct.omega;
    n.s = std::sqrt(gamma / unit);
    n.r = std::sqrt(budget.gamma_bar_r / unit);
    n.m3 = direct.m;
    n.fit = fit_laguerre(ris);
    return n;
}

double nakagami_unit_pdf(double m, double x)
{
    if (x <= 0.0)
    {
        return m == 0.5 ? std::sqrt(2.0 / std::numbers::pi) : 0.0;
    }
    return std::exp(std::log(2.0) + m * std::log(m) + (2.0 * m - 1.0) * std::log(x) - m * x * x -
                    special::log_gamma(m));
}

} // namespace

QuadratureValue composite_snr_cdf_quadrature_detail(const RisLinkParams &ris, const NakagamiParams &direct,
                                                    const LinkBudget &budget, double gamma, RisCdfModel model)
{
    direct.validate();
    require_gamma(gamma);
    require_positive_mean(budget.gamma_bar_c, "gamma_bar_c");
    if (ris.n_elements == 0 || budget.gamma_bar_r == 0.0)
    {
        return {direct_snr_cdf(direct, budget.gamma_bar_d, gamma), 0.0};
    }
    if (budget.gamma_bar_d == 0.0)
    {
        return {ris_snr_cdf(fit_laguerre(ris), budget.gamma_bar_r, gamma), 0.0};
    }
    if (gamma == 0.0)
    {
        return {0.0, 0.0};
    }

    const NormalizedComposite nc = normalize(ris, direct, budget, gamma);
    const double sigma = std::sqrt(nc.fit.var_sum);
    const double q0 = special::q_function(-std::sqrt(nc.fit.a));

    auto ris_cdf = [&](double u) {
        if (u <= 0.0)
        {
            return 0.0;
        }
        if (model == RisCdfModel::laguerre)
        {
            return special::gamma_p(nc.fit.a, u / nc.fit.b);
        }
        return std::clamp(1.0 - special::q_function((u - nc.fit.mean_sum) / sigma) / q0, 0.0, 1.0);
    };
    auto ris_pdf = [&](double u) {
        if (u <= 0.0)
        {
            return 0.0;
        }
        if (model == RisCdfModel::laguerre)
        {
            return boost::math::gamma_p_derivative(nc.fit.a, u / nc.fit.b) / nc.fit.b;
        }
        const double z = (u - nc.fit.mean_sum) / sigma;
        return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma * q0);
    };
    auto direct_cdf = [&](double x) { return x <= 0.0 ? 0.0 : special::gamma_p(nc.m3, nc.m3 * x * x); };

    // F = P(D + r S <= s). Integrate over whichever term has the narrower
    // amplitude spread, so the other CDF is smooth across each segment.
    const bool over_ris = nc.r * sigma < 1.0 / std::sqrt(nc.m3);
    const double upper = over_ris ? nc.s / nc.r : nc.s;
    std::function<double(double)> integrand;
    std::vector<double> cuts{0.0, upper};
    const std::array<double, 14> spread{-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0, 12.0, 16.0, 24.0, 32.0, 64.0};
    if (over_ris)
    {
        integrand = [&](double u) { return ris_pdf(u) * direct_cdf(nc.s - nc.r * u); };
        for (double k : spread)
        {
            cuts.push_back(nc.fit.mean_sum + k * sigma);
        }
        for (double c : {0.5, 1.0, 2.0})
        {
            cuts.push_back((nc.s - c) / nc.r);
        }
    }
    else
    {
        integrand = [&](double x) { return ris_cdf((nc.s - x) / nc.r) * nakagami_unit_pdf(nc.m3, x); };
        for (double k : spread)
        {
            cuts.push_back(nc.s - nc.r * (nc.fit.mean_sum + k * sigma));
        }
        for (double c : {0.5, 1.0, 2.0})
        {
            cuts.push_back(c);
        }
    }
    std::erase_if(cuts, [&](double c) { return !(c >= 0.0 && c <= upper); });
    std::sort(cuts.begin(), cuts.end());
    // Near-coincident cuts leave sub-ulp segments that Gauss-Kronrod cannot bisect.
    const double min_gap = 1e-13 * std::max(1.0, upper);
    cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](double a, double b) { return b - a <= min_gap; }), cuts.end());
    cuts.back() = upper;

    using Integrator = boost::math::quadrature::gauss_kronrod<double, 31>;
    long double total = 0.0L;
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        // Boost's tolerance is relative to the segment's L1 norm; tiny segments
        // only need an absolute accuracy of about 1e-14.
        const double rough = std::fabs(Integrator::integrate(integrand, cuts[i], cuts[i + 1], 0));
        const double tol = std::clamp(1e-14 / std::max(rough, 1e-300), 1e-11, 1e-3);
        double err = 0.0;
        total += Integrator::integrate(integrand, cuts[i], cuts[i + 1], 15, tol, &err);
        err_total += err;
    }
    const double value = std::clamp(static_cast<double>(total), 0.0, 1.0);
    if (err_total > 1e-9)
    {
        throw QuadratureError(err_total, "composite_snr_cdf_quadrature: error estimate " + std::to_string(err_total) +
                                             " exceeds 1e-9");
    }
    return {value, err_total};
}

double composite_snr_cdf_quadrature(const RisLinkParams &ris, const NakagamiParams &direct, const LinkBudget &budget,
                                    double gamma, RisCdfModel model)
{
    return composite_snr_cdf_quadrature_detail(ris, direct, budget, gamma, model).value;
}

namespace
{

// Gaussian-moment sums of the closed form. With mu = c2/c1 and h = (i+1)/2,
//   psi(p1, p2) = sum_{i=0}^{2m3-1} rho_i / (2 c1^h) * bracket_i,
//   rho_i = C(2m3-1, i) exp(c2^2/c1 - c3) mu^(2m3-1-i),
// which equals int_{p1}^{p2} x^(2m3-1) exp(-(c1 x^2 - 2 c2 x + c3)) dx.
// Returned already multiplied by m3^m3 / Gamma(m3); terms are assembled in
// log space since the factors individually under- and overflow.
class PsiSum
{
  public:
    PsiSum(double m3, double ris_var, double p) : n_(static_cast<int>(std::lround(2.0 * m3)))
    {
        c1_ = m3 + 1.0 / ris_var;
        mu_ = p / (m3 * ris_var + 1.0);
        // c2^2/c1 - c3 simplified to avoid cancellation.
        exponent_ = -m3 * p * p / (m3 * ris_var + 1.0);
        log_prefactor_ = m3 * std::log(m3) - special::log_gamma(m3);
    }

    double operator()(double p1, double p2) const
    {
        long double sum = 0.0L;
        for (int i = 0; i < n_; ++i)
        {
            const int power = n_ - 1 - i;
            double log_mu_term = 0.0;
            double sign = 1.0;
            if (power > 0)
            {
                if (mu_ == 0.0)
                {
                    continue;
                }
                log_mu_term = power * std::log(std::fabs(mu_));
                sign = (mu_ < 0.0 && (power % 2) == 1) ? -1.0 : 1.0;
            }
            const double h = 0.5 * (i + 1);
            const double lo = c1_ * (p1 - mu_) * (p1 - mu_);
            const double hi = c1_ * (p2 - mu_) * (p2 - mu_);
            const bool odd = (i % 2) == 1;
            double bracket;
            if (p1 >= mu_ || odd)
            {
                bracket = upper_difference(h, lo, hi);
            }
            else if (p2 <= mu_)
            {
                bracket = upper_difference(h, hi, lo);
            }
            else
            {
                bracket = special::gamma_p(h, lo) + special::gamma_p(h, hi);
            }
            if (bracket == 0.0)
            {
                continue;
            }
            const double log_coeff = log_prefactor_ + std::log(static_cast<double>(special::binomial(n_ - 1, i))) +
                                     exponent_ + log_mu_term - std::log(2.0) - h * std::log(c1_) +
                                     special::log_gamma(h);
            sum += static_cast<long double>(sign * bracket) * std::exp(static_cast<long double>(log_coeff));
        }
        return static_cast<double>(sum);
    }

  private:
    // Q(h, x) - Q(h, y), regularized, from whichever tail keeps precision.
    static double upper_difference(double h, double x, double y)
    {
        if (x > h && y > h)
        {
            return special::gamma_q(h, x) - special::gamma_q(h, y);
        }
        return special::gamma_p(h, y) - special::gamma_p(h, x);
    }

    int n_;
    double c1_ = 0.0;
    double mu_ = 0.0;
    double exponent_ = 0.0;
    double log_prefactor_ = 0.0;
};

void require_half_integer(double m3)
{
    const double twice = 2.0 * m3;
    if (std::fabs(twice - std::round(twice)) > 1e-6)
    {
        throw DomainError("composite_snr_cdf_closed: 2*m3 must be an integer, got m3 = " + std::to_string(m3));
    }
}

} // namespace

ClosedFormValue composite_snr_cdf_closed_detail(const RisLinkParams &ris, const NakagamiParams &direct,
                                                const LinkBudget &budget, double gamma)
{
    direct.validate();
    require_half_integer(direct.m);
    require_gamma(gamma);
    require_positive_mean(budget.gamma_bar_c, "gamma_bar_c");
    if (ris.n_elements == 0 || budget.gamma_bar_r == 0.0)
    {
        const double f = direct_snr_cdf(direct, budget.gamma_bar_d, gamma);
        return {f, f, false};
    }
    require_positive_mean(budget.gamma_bar_d, "gamma_bar_d");

    NakagamiParams d = direct;
    d.m = std::round(2.0 * direct.m) / 2.0;
    const NormalizedComposite nc = normalize(ris, d, budget, gamma);
    const double m3 = nc.m3;

    // Truncated-normal normalizer Q(-sqrt(a)) = 1 - Q(sqrt(a)).
    const double inv_q0 = 1.0 / special::q_function(-std::sqrt(nc.fit.a));
    const double ris_var = nc.r * nc.r * nc.fit.var_sum;
    const double p = nc.s - nc.r * nc.fit.mean_sum;
    const PsiSum psi(m3, ris_var, p);
    const double f_direct = special::gamma_p(m3, m3 * nc.s * nc.s);

    ClosedFormValue out;
    out.mean_above = p < 0.0;
    if (out.mean_above)
    {
        out.raw = (1.0 - inv_q0) * f_direct + inv_q0 * psi(0.0, nc.s);
    }
    else
    {
        out.raw = (1.0 - inv_q0) * f_direct + inv_q0 * special::gamma_p(m3, m3 * p * p) +
                  inv_q0 * (psi(p, nc.s) - psi(0.0, p));
    }
    out.value = std::clamp(out.raw, 0.0, 1.0);
    return out;
}

double composite_snr_cdf_closed(const RisLinkParams &ris, const NakagamiParams &direct, const LinkBudget &budget,
                                double gamma)
{
    return composite_snr_cdf_closed_detail(ris, direct, budget, gamma).value;
}

double round_to_half_integer(double m)
{
    return std::max(0.5, std::round(2.0 * m) / 2.0);
}

std::string_view to_string(LinkType t)
{
    switch (t)
    {
    case LinkType::direct:
        return "direct";
    case LinkType::ris_only:
        return "ris";
    case LinkType::composite:
        return "composite";
    }
    return "unknown";
}

std::string_view to_string(CompositeMethod m)
{
    return m == CompositeMethod::closed_form ? "closed_form" : "quadrature";
}

double link_snr_cdf(const Link &link, double gamma, CompositeMethod method)
{
    NakagamiParams direct = link.direct;
    if (method == CompositeMethod::closed_form)
    {
        direct.m = round_to_half_integer(direct.m);
    }
    switch (link.type)
    {
    case LinkType::direct:
        return direct_snr_cdf(direct, link.budget.gamma_bar_d, gamma);
    case LinkType::ris_only:
        require_gamma(gamma);
        if (link.ris.n_elements == 0)
        {
            return 1.0;
        }
        return ris_snr_cdf(fit_laguerre(link.ris), link.budget.gamma_bar_r, gamma);
    case LinkType::composite:
        if (method == CompositeMethod::closed_form)
        {
            return composite_snr_cdf_closed(link.ris, direct, link.budget, gamma);
        }
        return composite_snr_cdf_quadrature(link.ris, direct, link.budget, gamma);
    }
    throw DomainError("link_snr_cdf: unknown link type");
}

} // namespace risnoma
