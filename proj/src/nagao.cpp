#include "thetarank/nagao.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "thetarank/pointcount.hpp"

namespace thetarank {

namespace {

bool is_bad(const CurveQ& e, std::uint32_t p) {
    return std::any_of(e.bad_primes.begin(), e.bad_primes.end(), [p](const BigInt& q) { return q == p; });
}

double term(const LocalCount& c, NagaoForm form) {
    const double logp = std::log(static_cast<double>(c.p));
    const double np = static_cast<double>(c.np);
    if (form == NagaoForm::point_count) return (1.0 - static_cast<double>(c.p - 1) / np) * logp;
    return static_cast<double>(2 - c.ap) / np * logp;
}

// Adds the terms for primes in [from, to) to `sum`, in increasing order.
void accumulate(const CurveQ& e, std::uint32_t from, std::uint32_t to, NagaoForm form, double& sum) {
    if (to <= from) return;
    for (std::uint32_t p : primes_below(to)) {
        if (p < from || p == 2 || is_bad(e, p)) continue;
        sum += term(count_points(e, p), form);
    }
}

}  // namespace

SieveConfig::SieveConfig() : SieveConfig({{1000, 15.0}, {10000, 20.0}, {100000, 40.0}}) {}

SieveConfig::SieveConfig(std::vector<SieveStage> stages) : stages_(std::move(stages)) {
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        if (stages_[i].bound < 2) throw std::invalid_argument("sieve: stage bound must be >= 2");
        if (i > 0 && stages_[i].bound <= stages_[i - 1].bound)
            throw std::invalid_argument("sieve: stage bounds must be strictly increasing");
        // -inf is allowed and disables a stage.
        if (std::isnan(stages_[i].threshold) || stages_[i].threshold == HUGE_VAL)
            throw std::invalid_argument("sieve: threshold must be a number below +inf");
    }
}

SieveConfig SieveConfig::parse(const std::string& text) {
    std::vector<SieveStage> stages;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("sieve: expected bound:threshold, got '" + item + "'");
        try {
            const unsigned long bound = std::stoul(item.substr(0, colon));
            const std::string th = item.substr(colon + 1);
            const double threshold = (th == "-inf") ? -HUGE_VAL : std::stod(th);
            stages.push_back({static_cast<std::uint32_t>(bound), threshold});
        } catch (const std::logic_error&) {
            throw std::invalid_argument("sieve: malformed stage '" + item + "'");
        }
    }
    return SieveConfig(std::move(stages));
}

std::string SieveConfig::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < stages_.size(); ++i) {
        if (i) out << ',';
        out << stages_[i].bound << ':';
        if (std::isinf(stages_[i].threshold)) {
            out << "-inf";
        } else {
            out << stages_[i].threshold;
        }
    }
    return out.str();
}

double nagao_sum(const CurveQ& e, std::uint32_t bound, NagaoForm form) {
    double sum = 0.0;
    accumulate(e, 0, bound, form, sum);
    return sum;
}

FilterResult passes_filter(const CurveQ& e, const SieveConfig& cfg) {
    FilterResult result{.passed = true};
    double sum = 0.0;
    std::uint32_t done = 0;
    for (const auto& stage : cfg.stages()) {
        accumulate(e, done, stage.bound, NagaoForm::trace, sum);
        done = stage.bound;
        const bool ok = sum > stage.threshold;
        result.values.push_back({stage.bound, sum, ok});
        if (!ok) {
            result.passed = false;
            break;
        }
    }
    return result;
}

}  // namespace thetarank
