#include "kppw/pk.hpp"

namespace kppw {

namespace {

void strip(std::vector<BigInt>& c)
{
    while (!c.empty() && c.back() == 0)
        c.pop_back();
}

} // namespace

GammaPoly GammaPoly::constant(BigInt v)
{
    GammaPoly p;
    if (v != 0)
        p.c.push_back(std::move(v));
    return p;
}

GammaPoly GammaPoly::operator+(const GammaPoly& o) const
{
    GammaPoly r;
    r.c.resize(std::max(c.size(), o.c.size()), BigInt(0));
    for (size_t i = 0; i < c.size(); ++i)
        r.c[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i)
        r.c[i] += o.c[i];
    strip(r.c);
    return r;
}

GammaPoly GammaPoly::times_gamma_plus(const BigInt& shift) const
{
    if (is_zero())
        return zero();
    GammaPoly r;
    r.c.assign(c.size() + 1, BigInt(0));
    for (size_t i = 0; i < c.size(); ++i) {
        r.c[i + 1] += c[i];
        r.c[i] += shift * c[i];
    }
    strip(r.c);
    return r;
}

double GammaPoly::eval(double gamma) const
{
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        v = v * gamma + it->convert_to<double>();
    return v;
}

BigInt GammaPoly::eval_exact(const BigInt& gamma) const
{
    BigInt v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        v = v * gamma + *it;
    return v;
}

std::string GammaPoly::to_string() const
{
    if (is_zero())
        return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        if (c[i] == 0)
            continue;
        BigInt a = c[i];
        if (s.empty()) {
            if (a < 0) {
                s += "-";
                a = -a;
            }
        } else {
            s += (a < 0) ? " - " : " + ";
            if (a < 0)
                a = -a;
        }
        const bool unit = (a == 1) && i > 0;
        if (!unit)
            s += a.str();
        if (i > 0) {
            if (!unit)
                s += "*";
            s += "g";
            if (i > 1)
                s += "^" + std::to_string(i);
        }
    }
    return s;
}

PkOperator pk_build(int K)
{
    if (K < 0)
        throw InvalidSpec("pk_build: order must be >= 0");
    std::vector<GammaPoly> a{GammaPoly::constant(1)};
    for (int k = 0; k < K; ++k) {
        std::vector<GammaPoly> next(a.size() + 1, GammaPoly::zero());
        for (size_t j = 0; j < a.size(); ++j) {
            next[j + 1] = next[j + 1] + a[j];                       // (P_k[phi])'
            next[j] = next[j] + a[j].times_gamma_plus(BigInt(-k));  // (gamma - k) P_k[phi]
        }
        a = std::move(next);
    }
    return PkOperator{K, std::move(a)};
}

std::vector<double> pk_eval(const PkOperator& op, double gamma)
{
    std::vector<double> v(op.coeffs.size());
    for (size_t j = 0; j < op.coeffs.size(); ++j)
        v[j] = op.coeffs[j].eval(gamma);
    return v;
}

double pk_apply(const PkOperator& op, double gamma,
                const std::vector<double>& derivative_samples)
{
    if (derivative_samples.size() != op.coeffs.size())
        throw InvalidSpec("pk_apply: need K+1 derivative samples");
    double s = 0.0;
    for (size_t j = 0; j < op.coeffs.size(); ++j)
        s += op.coeffs[j].eval(gamma) * derivative_samples[j];
    return s;
}

} // namespace kppw
