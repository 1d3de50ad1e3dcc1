#pragma once

#include <cstdint>
#include <vector>

#include "thetarank/curves.hpp"

namespace thetarank {

struct SieveStage {
    std::uint32_t bound = 0;  // primes p < bound
    double threshold = 0.0;   // stage passes when S(bound, E) > threshold

    friend bool operator==(const SieveStage&, const SieveStage&) = default;
};

/// Staged Mestre-Nagao filter; bounds strictly increasing.
class SieveConfig {
public:
    /// (10^3, 15), (10^4, 20), (10^5, 40)
    SieveConfig();
    explicit SieveConfig(std::vector<SieveStage> stages);
    /// "1000:15,10000:20,100000:40"
    static SieveConfig parse(const std::string& text);

    const std::vector<SieveStage>& stages() const { return stages_; }
    std::string to_string() const;

private:
    std::vector<SieveStage> stages_;
};

enum class NagaoForm {
    trace,      // (2 - a_p) / N_p * log p
    point_count // (1 - (p - 1) / N_p) * log p
};

/// S(N, E) over primes p < N of good reduction, natural log, summed in
/// increasing p. Bad primes contribute nothing.
double nagao_sum(const CurveQ& e, std::uint32_t bound, NagaoForm form = NagaoForm::trace);

struct StageValue {
    std::uint32_t bound = 0;
    double value = 0.0;
    bool passed = false;
};

struct FilterResult {
    bool passed = false;
    /// One entry per evaluated stage; evaluation stops at the first failure.
    std::vector<StageValue> values;
};

/// Evaluates the stages in order, extending one running sum, and stops at
/// the first stage that does not pass.
FilterResult passes_filter(const CurveQ& e, const SieveConfig& cfg);

}  // namespace thetarank
