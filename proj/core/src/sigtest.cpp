#include "stopir/sigtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "stopir/error.hpp"

namespace stopir {

ScoreMatrix::ScoreMatrix(std::vector<std::string> labels, std::vector<std::vector<double>> rows)
    : m_labels(std::move(labels)), m_rows(std::move(rows)) {
    if (m_labels.size() < 2) {
        throw InvalidArgument("score matrix needs at least 2 treatments");
    }
    if (m_rows.size() < 2) {
        throw InvalidArgument("score matrix needs at least 2 subjects");
    }
    for (auto const& row : m_rows) {
        if (row.size() != m_labels.size()) {
            throw InvalidArgument("score matrix rows must have one value per treatment");
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw InvalidArgument("score matrix values must be finite");
            }
        }
    }
}

auto ScoreMatrix::column(std::size_t j) const -> std::vector<double> {
    std::vector<double> out;
    out.reserve(m_rows.size());
    for (auto const& row : m_rows) {
        out.push_back(row.at(j));
    }
    return out;
}

auto average_ranks(std::span<double const> values) -> std::vector<double> {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) {
            ++j;
        }
        // positions i..j-1 hold ranks i+1..j
        double const mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            ranks[order[t]] = mid;
        }
        i = j;
    }
    return ranks;
}

namespace {

// Sum over tie groups of (t^3 - t).
auto tie_term(std::span<double const> values) -> double {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        double const t = static_cast<double>(j - i);
        total += t * t * t - t;
        i = j;
    }
    return total;
}

auto gamma_p_series(double a, double x) -> double {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
auto gamma_q_fraction(double a, double x) -> double {
    constexpr double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        double const an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        double const delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

auto regularized_gamma_q(double a, double x) -> double {
    if (!(a > 0.0) || x < 0.0) {
        throw InvalidArgument("regularized_gamma_q requires a > 0 and x >= 0");
    }
    if (x == 0.0) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
    }
    return std::clamp(gamma_q_fraction(a, x), 0.0, 1.0);
}

auto chi_square_upper_tail(double x, std::size_t df) -> double {
    if (df == 0) {
        throw InvalidArgument("chi-square degrees of freedom must be positive");
    }
    if (!(x >= 0.0)) {
        throw InvalidArgument("chi-square statistic must be >= 0");
    }
    return regularized_gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
}

auto friedman(ScoreMatrix const& matrix) -> FriedmanResult {
    std::size_t const n = matrix.subjects();
    std::size_t const k = matrix.treatments();
    double const nd = static_cast<double>(n);
    double const kd = static_cast<double>(k);

    std::vector<double> rank_sums(k, 0.0);
    double ties = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        auto const row = matrix.row(i);
        auto const ranks = average_ranks(row);
        for (std::size_t j = 0; j < k; ++j) {
            rank_sums[j] += ranks[j];
        }
        ties += tie_term(row);
    }

    FriedmanResult result;
    result.df = k - 1;
    result.mean_ranks.resize(k);
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        result.mean_ranks[j] = rank_sums[j] / nd;
        sum_sq += rank_sums[j] * rank_sums[j];
    }
    double chi2 = 12.0 / (nd * kd * (kd + 1.0)) * sum_sq - 3.0 * nd * (kd + 1.0);
    if (ties > 0.0) {
        double const correction = 1.0 - ties / (nd * kd * (kd * kd - 1.0));
        if (correction <= 1e-12) {
            // every row fully tied
            result.chi2 = 0.0;
            result.p_value = 1.0;
            result.tie_corrected = true;
            return result;
        }
        chi2 /= correction;
        result.tie_corrected = true;
    }
    result.chi2 = std::max(0.0, chi2);
    result.p_value = chi_square_upper_tail(result.chi2, result.df);
    return result;
}

auto friedman_from_mean_ranks(std::span<double const> mean_ranks, std::size_t n) -> FriedmanResult {
    std::size_t const k = mean_ranks.size();
    if (k < 2 || n < 2) {
        throw InvalidArgument("Friedman statistic needs n >= 2 and k >= 2");
    }
    double const kd = static_cast<double>(k);
    double const expected = (kd + 1.0) / 2.0;
    double sum_sq = 0.0;
    for (double r : mean_ranks) {
        sum_sq += (r - expected) * (r - expected);
    }
    FriedmanResult result;
    result.df = k - 1;
    result.mean_ranks.assign(mean_ranks.begin(), mean_ranks.end());
    result.chi2 = 12.0 * static_cast<double>(n) / (kd * (kd + 1.0)) * sum_sq;
    result.p_value = chi_square_upper_tail(result.chi2, result.df);
    return result;
}

auto wilcoxon_exact_p(std::span<double const> ranks, double w_plus) -> double {
    // Mid-ranks are multiples of 1/2, so doubled ranks are integers.
    std::vector<std::size_t> doubled;
    doubled.reserve(ranks.size());
    std::size_t total = 0;
    for (double r : ranks) {
        doubled.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
        total += doubled.back();
    }
    // counts[s] = number of sign patterns whose doubled W+ equals s
    std::vector<std::uint64_t> counts(total + 1, 0);
    counts[0] = 1;
    std::size_t reach = 0;
    for (auto r : doubled) {
        for (std::size_t s = reach + 1; s-- > 0;) {
            if (counts[s] != 0) {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    auto const observed = static_cast<std::size_t>(std::llround(2.0 * w_plus));
    std::size_t const tail = std::min(observed, total - observed);
    std::uint64_t at_or_below = 0;
    for (std::size_t s = 0; s <= tail; ++s) {
        at_or_below += counts[s];
    }
    double const patterns = std::ldexp(1.0, static_cast<int>(ranks.size()));
    return std::min(1.0, 2.0 * static_cast<double>(at_or_below) / patterns);
}

auto wilcoxon_normal_p(std::span<double const> ranks, double w_plus) -> double {
    double const n = static_cast<double>(ranks.size());
    double const mean = n * (n + 1.0) / 4.0;
    double const variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term(ranks) / 48.0;
    if (!(variance > 0.0)) {
        return 1.0;
    }
    double const z = (std::abs(w_plus - mean) - 0.5) / std::sqrt(variance);
    if (z <= 0.0) {
        return 1.0;
    }
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

auto wilcoxon_signed_rank(std::span<double const> a, std::span<double const> b) -> WilcoxonResult {
    if (a.size() != b.size() || a.empty()) {
        throw InvalidArgument("Wilcoxon test needs two non-empty samples of equal length");
    }
    WilcoxonResult result;
    result.n = a.size();
    std::vector<double> magnitudes;
    std::vector<bool> positive;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double const d = a[i] - b[i];
        if (!std::isfinite(d)) {
            throw InvalidArgument("Wilcoxon test values must be finite");
        }
        if (d == 0.0) {
            ++result.counts.tied;
            continue;
        }
        (d > 0.0 ? result.counts.better : result.counts.worse) += 1;
        magnitudes.push_back(std::abs(d));
        positive.push_back(d > 0.0);
    }
    result.n_used = magnitudes.size();
    if (result.n_used == 0) {
        result.p_value = 1.0;
        return result;
    }
    auto const ranks = average_ranks(magnitudes);
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        (positive[i] ? result.w_plus : result.w_minus) += ranks[i];
    }
    result.statistic = std::min(result.w_plus, result.w_minus);
    result.exact = result.n_used <= kWilcoxonExactLimit;
    result.p_value = result.exact ? wilcoxon_exact_p(ranks, result.w_plus)
                                  : wilcoxon_normal_p(ranks, result.w_plus);
    return result;
}

}  // namespace stopir
