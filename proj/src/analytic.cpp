#include "rach/analytic.hpp"

#include "rach/kernels/batch.hpp"
#include "rach/kernels/scalar_math.hpp"

namespace rach {

double throughput(const ContentionConfig& cfg) {
    cfg.validate();
    if (cfg.n < 1.0)
        throw DomainError("throughput: n must be >= 1 (got n < 1; clamp estimates first)");
    const double pom = cfg.p / cfg.M;
    const double qn1 = kern::survival_pow(cfg.n - 1.0, pom);
    const double a = cfg.n * cfg.p;
    return a * qn1;
}

double expected_idle(const ContentionConfig& cfg) {
    cfg.validate();
    const double pom = cfg.p / cfg.M;
    return static_cast<double>(cfg.M) * kern::survival_pow(cfg.n, pom);
}

double expected_consumption(const ContentionConfig& cfg, const ResourceCosts& costs) {
    cfg.validate();
    costs.validate();
    const double pom = cfg.p / cfg.M;
    const double qn = kern::survival_pow(cfg.n, pom);
    const double d = costs.occupied - costs.idle;
    const double t = d * qn;
    return static_cast<double>(cfg.M) * (costs.occupied - t);
}

double efficiency(const ContentionConfig& cfg, const ResourceCosts& costs) {
    const double S = throughput(cfg);
    const double R = expected_consumption(cfg, costs);
    if (R == 0.0)
        throw DomainError("efficiency: expected consumption is zero, T = S/R undefined");
    return S / R;
}

void curve(double n, int M, const ResourceCosts& costs, std::span<const double> p,
           std::span<double> S, std::span<double> R) {
    if (n < 1.0) throw DomainError("curve: n must be >= 1");
    if (M < 1) throw InvariantError("curve: M must be >= 1");
    costs.validate();
    if ((!S.empty() && S.size() != p.size()) || (!R.empty() && R.size() != p.size()))
        throw InvariantError("curve: output span size mismatch");
    kern::curve_sr(n, M, costs, p, S, R);
}

}  // namespace rach
