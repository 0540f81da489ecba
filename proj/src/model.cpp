#include "kppw/model.hpp"

#include <cmath>

namespace kppw {

void ProblemSpec::validate() const
{
    if (k < 1 || l < 1)
        throw InvalidSpec("ProblemSpec: k and l must be >= 1");
    if (k == l)
        throw InvalidSpec("ProblemSpec: k == l is not admitted");
    if (sign_t != 1 && sign_t != -1)
        throw InvalidSpec("ProblemSpec: sign_t must be -1 or +1");
    if (sign_x != 1 && sign_x != -1)
        throw InvalidSpec("ProblemSpec: sign_x must be -1 or +1");
    if (n < 0.0)
        throw InvalidSpec("ProblemSpec: n must be >= 0");
}

double int_pow(double lambda, int p)
{
    double r = 1.0;
    for (int i = 0; i < p; ++i)
        r *= lambda;
    return r;
}

namespace {

ProblemSpec make(const std::string& family, int k, int l, int st, int sx, double n = 0.0)
{
    ProblemSpec s;
    s.family = family;
    s.k = k;
    s.l = l;
    s.sign_t = st;
    s.sign_x = sx;
    s.n = n;
    s.label = "KPP-(" + std::to_string(k) + "," + std::to_string(l) + ") " + family;
    s.validate();
    return s;
}

std::vector<ProblemSpec> build_catalog()
{
    std::vector<ProblemSpec> c;

    // second-order reaction-diffusion front, minimal speed 2
    c.push_back(make("classic", 2, 1, -1, +1));

    // semilinear heat equations of order 2m: -lambda f' = (-1)^{m+1} f^(2m) + f(1-f)
    for (int m = 2; m <= 5; ++m)
        c.push_back(make("she", 2 * m, 1, -1, (m % 2 == 0) ? -1 : +1));

    // eleventh-order dispersion, odd time orders
    for (int l = 1; l <= 9; l += 2)
        c.push_back(make("dispersion", 11, l, -1, -1));

    // eleventh-order dispersion with even time orders
    for (int l = 2; l <= 10; l += 2)
        c.push_back(make("dispersion-hyperbolic", 11, l, +1, -1));

    // tenth-order mixed parabolic family; spatial sign alternates with l
    c.push_back(make("dispersion-parabolic", 10, 3, -1, -1));
    c.push_back(make("dispersion-parabolic", 10, 5, -1, +1));
    c.push_back(make("dispersion-parabolic", 10, 7, -1, -1));
    c.push_back(make("dispersion-parabolic", 10, 9, -1, +1));

    // tenth-order hyperbolic family
    c.push_back(make("hyperbolic", 10, 2, +1, +1));
    c.push_back(make("hyperbolic", 10, 4, +1, -1));
    c.push_back(make("hyperbolic", 10, 6, +1, +1));
    c.push_back(make("hyperbolic", 10, 8, +1, -1));

    // elliptic patterns (no evolution semantics, ODE catalog entries only)
    c.push_back(make("elliptic", 10, 2, +1, -1));
    c.push_back(make("elliptic", 10, 4, +1, +1));
    c.push_back(make("elliptic", 10, 6, +1, -1));

    // time order exceeding the spatial order
    c.push_back(make("exotic", 10, 11, -1, -1));
    c.push_back(make("exotic", 11, 12, +1, -1));

    // eleventh order in t with low spatial orders
    for (int k = 1; k <= 4; ++k)
        c.push_back(make("t11", k, 11, -1, -1));

    // quasilinear dispersion member, default exponent n = 1
    c.push_back(make("quasilinear", 11, 1, -1, -1, 1.0));

    return c;
}

} // namespace

const std::vector<ProblemSpec>& catalog()
{
    static const std::vector<ProblemSpec> c = build_catalog();
    return c;
}

ProblemSpec catalog_lookup(const std::string& family, int k, int l)
{
    for (const auto& s : catalog())
        if (s.family == family && s.k == k && s.l == l)
            return s;
    throw UnknownEquation("no catalogued equation (" + family + "," + std::to_string(k) +
                          "," + std::to_string(l) + ")");
}

Eigen::VectorXd system_rhs(const ProblemSpec& spec, const Eigen::VectorXd& state,
                           double lambda)
{
    if (!spec.semilinear())
        throw InvalidSpec("system_rhs: quasilinear specs are handled separately");
    const int m = spec.system_order(lambda);
    if (state.size() != m)
        throw InvalidSpec("system_rhs: state must have " + std::to_string(m) +
                          " components");

    Eigen::VectorXd g(m);
    for (int j = 0; j + 1 < m; ++j)
        g[j] = state[j + 1];

    const double src = LogisticSource::value(state[0]);
    if (lambda == 0.0 && spec.l > spec.k) {
        // reduced equation: 0 = s_x f^(k) + f(1-f)
        g[m - 1] = -spec.sign_x * src;
    } else if (spec.k > spec.l) {
        // f^(k) = s_x (s_t lambda^l f^(l) - f(1-f))
        g[m - 1] = spec.sign_x * (spec.sign_t * int_pow(lambda, spec.l) * state[spec.l] - src);
    } else {
        // l > k: f^(l) = s_t (s_x f^(k) + f(1-f)) / lambda^l
        g[m - 1] = spec.sign_t * (spec.sign_x * state[spec.k] + src) / int_pow(lambda, spec.l);
    }
    return g;
}

Eigen::MatrixXd system_jacobian(const ProblemSpec& spec, const Eigen::VectorXd& state,
                                double lambda)
{
    if (!spec.semilinear())
        throw InvalidSpec("system_jacobian: quasilinear specs are handled separately");
    const int m = spec.system_order(lambda);
    if (state.size() != m)
        throw InvalidSpec("system_jacobian: state must have " + std::to_string(m) +
                          " components");

    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(m, m);
    for (int r = 0; r + 1 < m; ++r)
        j(r, r + 1) = 1.0;

    const double dsrc = LogisticSource::derivative(state[0]);
    if (lambda == 0.0 && spec.l > spec.k) {
        j(m - 1, 0) = -spec.sign_x * dsrc;
    } else if (spec.k > spec.l) {
        j(m - 1, 0) = -spec.sign_x * dsrc;
        j(m - 1, spec.l) += spec.sign_x * spec.sign_t * int_pow(lambda, spec.l);
    } else {
        const double c = spec.sign_t / int_pow(lambda, spec.l);
        j(m - 1, 0) = c * dsrc;
        j(m - 1, spec.k) += c * spec.sign_x;
    }
    return j;
}

double equation_defect(const ProblemSpec& spec, const std::vector<double>& derivs,
                       double lambda)
{
    if (static_cast<int>(derivs.size()) < spec.order() + 1)
        throw InvalidSpec("equation_defect: need derivatives up to order max(k,l)");
    return spec.sign_t * int_pow(lambda, spec.l) * derivs[spec.l] -
           spec.sign_x * derivs[spec.k] - LogisticSource::value(derivs[0]);
}

} // namespace kppw
