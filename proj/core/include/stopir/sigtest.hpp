#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace stopir {

/// Significance level used when reports flag a difference.
inline constexpr double kSignificanceLevel = 0.05;

/// n subjects (queries) x k treatments (techniques).
class ScoreMatrix {
  public:
    /// Throws InvalidArgument unless n >= 2, k >= 2 and every row has k
    /// finite values.
    ScoreMatrix(std::vector<std::string> labels, std::vector<std::vector<double>> rows);

    [[nodiscard]] auto subjects() const noexcept -> std::size_t { return m_rows.size(); }
    [[nodiscard]] auto treatments() const noexcept -> std::size_t { return m_labels.size(); }
    [[nodiscard]] auto labels() const noexcept -> std::vector<std::string> const& { return m_labels; }
    [[nodiscard]] auto row(std::size_t i) const -> std::span<double const> { return m_rows.at(i); }
    [[nodiscard]] auto column(std::size_t j) const -> std::vector<double>;

  private:
    std::vector<std::string> m_labels;
    std::vector<std::vector<double>> m_rows;
};

struct FriedmanResult {
    double chi2 = 0.0;
    std::size_t df = 0;
    double p_value = 1.0;
    std::vector<double> mean_ranks;
    bool tie_corrected = false;
};

/// Friedman two-way analysis of variance by ranks. Ranks are ascending
/// within each row (largest value gets rank k) with mid-ranks for ties; the
/// statistic is divided by the tie-correction factor when ties exist.
[[nodiscard]] auto friedman(ScoreMatrix const& matrix) -> FriedmanResult;

/// Recovers the statistic from published per-treatment mean ranks, using the
/// deviation form 12n/(k(k+1)) * sum (rbar_j - (k+1)/2)^2 so that rounding of
/// the printed ranks is not amplified.
[[nodiscard]] auto friedman_from_mean_ranks(std::span<double const> mean_ranks, std::size_t n)
    -> FriedmanResult;

struct SignCounts {
    std::size_t better = 0;  // a > b
    std::size_t worse = 0;   // a < b
    std::size_t tied = 0;

    friend auto operator==(SignCounts, SignCounts) -> bool = default;
};

struct WilcoxonResult {
    std::size_t n = 0;
    std::size_t n_used = 0;
    double w_plus = 0.0;
    double w_minus = 0.0;
    double statistic = 0.0;  // min(w_plus, w_minus)
    double p_value = 1.0;    // two-sided
    bool exact = true;
    SignCounts counts;
};

/// Largest n_used for which the p-value is computed exactly.
inline constexpr std::size_t kWilcoxonExactLimit = 20;

/// Wilcoxon matched-pairs signed-rank test on a - b. Zero differences are
/// dropped. Exact two-sided p for n_used <= 20, otherwise the normal
/// approximation with tie-corrected variance and continuity correction.
[[nodiscard]] auto wilcoxon_signed_rank(std::span<double const> a, std::span<double const> b)
    -> WilcoxonResult;

/// Exact two-sided p from the null distribution of W+ given (possibly tied)
/// ranks. `w_plus` must be a sum of a subset of `ranks`.
[[nodiscard]] auto wilcoxon_exact_p(std::span<double const> ranks, double w_plus) -> double;

/// Normal approximation with continuity correction.
[[nodiscard]] auto wilcoxon_normal_p(std::span<double const> ranks, double w_plus) -> double;

/// 1-based ranks, ties receive the mean of the positions they span.
[[nodiscard]] auto average_ranks(std::span<double const> values) -> std::vector<double>;

/// Upper regularized incomplete gamma Q(a, x).
[[nodiscard]] auto regularized_gamma_q(double a, double x) -> double;

/// P(X > x) for X ~ chi-square(df). Throws InvalidArgument for x < 0 or
/// df == 0.
[[nodiscard]] auto chi_square_upper_tail(double x, std::size_t df) -> double;

}  // namespace stopir
