#include "rach/oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "rach/kernels/batch.hpp"

namespace rach::oracle {

namespace {

void validate_round_args(std::int64_t n, double p, int M) {
    if (n < 0) throw InvariantError("simulate_round: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw InvariantError("simulate_round: p must lie in [0, 1]");
    if (M < 1) throw InvariantError("simulate_round: M must be >= 1");
}

double consumed_of(int occupied, int idle, const ResourceCosts& costs) {
    return static_cast<double>(occupied) * costs.occupied +
           static_cast<double>(idle) * costs.idle;
}

}  // namespace

RoundSample simulate_round(std::int64_t n, double p, int M, const ResourceCosts& costs,
                           kern::PhiloxStream& rng) {
    validate_round_args(n, p, M);
    costs.validate();

    thread_local std::vector<std::uint32_t> draw_buf;
    thread_local std::vector<int> occupancy;

    draw_buf.resize(static_cast<std::size_t>(2 * n));
    rng.fill_u32(draw_buf);
    const std::size_t transmitters =
        kern::bernoulli_count(draw_buf.data(), static_cast<std::size_t>(n), p);

    occupancy.assign(static_cast<std::size_t>(M), 0);
    for (std::size_t i = 0; i < transmitters; ++i)
        ++occupancy[rng.bounded(static_cast<std::uint32_t>(M))];

    RoundSample out;
    for (int c : occupancy) {
        if (c == 0)
            ++out.split.idle;
        else if (c == 1)
            ++out.split.singleton;
        else
            ++out.split.collided;
    }
    out.successes = out.split.singleton;
    out.consumed = consumed_of(out.split.singleton + out.split.collided, out.split.idle, costs);
    return out;
}

namespace {

double binom(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

void check_cap(int n, int M, double cap) {
    // sum_k C(n,k) M^k = (M+1)^n
    const double space = std::pow(static_cast<double>(M) + 1.0, n);
    if (!(space <= cap))
        throw CapExceededError("exact_expectations: outcome space (M+1)^n = " +
                               std::to_string(space) + " exceeds cap " + std::to_string(cap) +
                               " for n=" + std::to_string(n) + ", M=" + std::to_string(M));
}

// Enumerate occupancy vectors of k balls into M bins, accumulating the
// multinomially weighted singleton and idle counts.
void occupancy_recursion(int bin, int M, int left, double mult, int singles, int idles,
                         double& tot_s, double& tot_i) {
    if (bin == M) {
        if (left == 0) {
            tot_s += mult * singles;
            tot_i += mult * idles;
        }
        return;
    }
    for (int c = 0; c <= left; ++c) {
        occupancy_recursion(bin + 1, M, left - c, mult * binom(left, c),
                            singles + (c == 1 ? 1 : 0), idles + (c == 0 ? 1 : 0), tot_s,
                            tot_i);
    }
}

ExactExpectations combine(int n, double p, int M, const ResourceCosts& costs,
                          const std::vector<double>& es_k, const std::vector<double>& ei_k) {
    ExactExpectations out;
    for (int k = 0; k <= n; ++k) {
        const double w = binom(n, k) * std::pow(p, k) * std::pow(1.0 - p, n - k);
        if (w == 0.0) continue;
        out.successes += w * es_k[k];
        out.idle += w * ei_k[k];
    }
    out.consumption = (M - out.idle) * costs.occupied + out.idle * costs.idle;
    return out;
}

}  // namespace

ExactExpectations exact_expectations(int n, double p, int M, const ResourceCosts& costs,
                                     double outcome_cap) {
    validate_round_args(n, p, M);
    costs.validate();
    check_cap(n, M, outcome_cap);

    std::vector<double> es_k(n + 1), ei_k(n + 1);
    for (int k = 0; k <= n; ++k) {
        double tot_s = 0.0, tot_i = 0.0;
        occupancy_recursion(0, M, k, 1.0, 0, 0, tot_s, tot_i);
        const double denom = std::pow(static_cast<double>(M), k);
        es_k[k] = tot_s / denom;
        ei_k[k] = tot_i / denom;
    }
    return combine(n, p, M, costs, es_k, ei_k);
}

ExactExpectations exact_expectations_raw(int n, double p, int M, const ResourceCosts& costs,
                                         double outcome_cap) {
    validate_round_args(n, p, M);
    costs.validate();
    check_cap(n, M, outcome_cap);

    std::vector<double> es_k(n + 1), ei_k(n + 1);
    std::vector<int> assign(n, 0), occ(M, 0);
    for (int k = 0; k <= n; ++k) {
        double tot_s = 0.0, tot_i = 0.0;
        double cnt = 0.0;
        // odometer over all M^k assignments
        std::fill(assign.begin(), assign.begin() + k, 0);
        while (true) {
            std::fill(occ.begin(), occ.end(), 0);
            for (int i = 0; i < k; ++i) ++occ[assign[i]];
            int s = 0, idle = 0;
            for (int c : occ) {
                if (c == 1) ++s;
                if (c == 0) ++idle;
            }
            tot_s += s;
            tot_i += idle;
            cnt += 1.0;
            int pos = 0;
            while (pos < k && ++assign[pos] == M) assign[pos++] = 0;
            if (pos == k) break;
        }
        es_k[k] = tot_s / cnt;
        ei_k[k] = tot_i / cnt;
    }
    return combine(n, p, M, costs, es_k, ei_k);
}

MonteCarloStats monte_carlo(std::int64_t n, double p, int M, const ResourceCosts& costs,
                            std::int64_t rounds, kern::PhiloxStream& rng) {
    if (rounds < 1) throw InvariantError("monte_carlo: rounds must be >= 1");
    double sum_s = 0, sq_s = 0, sum_i = 0, sq_i = 0, sum_r = 0, sq_r = 0;
    for (std::int64_t t = 0; t < rounds; ++t) {
        const RoundSample s = simulate_round(n, p, M, costs, rng);
        const double vs = s.successes, vi = s.split.idle, vr = s.consumed;
        sum_s += vs;
        sq_s += vs * vs;
        sum_i += vi;
        sq_i += vi * vi;
        sum_r += vr;
        sq_r += vr * vr;
    }
    const double R = static_cast<double>(rounds);
    MonteCarloStats st;
    st.rounds = rounds;
    st.mean_successes = sum_s / R;
    st.mean_idle = sum_i / R;
    st.mean_consumed = sum_r / R;
    auto se = [R](double sum, double sq) {
        const double var = (sq - sum * sum / R) / (R - 1.0);
        return std::sqrt(var / R);
    };
    st.se_successes = se(sum_s, sq_s);
    st.se_idle = se(sum_i, sq_i);
    st.se_consumed = se(sum_r, sq_r);
    return st;
}

}  // namespace rach::oracle
