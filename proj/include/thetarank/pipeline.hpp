#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thetarank/candidates.hpp"
#include "thetarank/descent.hpp"
#include "thetarank/nagao.hpp"

namespace thetarank {

enum class Mode { sweep, hunt, verify, table1, analyze };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& text);

/// Which Selmer rank classifies curves: the 2-isogeny bound
/// log2(|S^phi||S^phi'|) - 2, or dim Sel^2 - 2 from complete 2-descent.
enum class SelmerKind { isogeny, full };

std::string selmer_kind_name(SelmerKind k);
SelmerKind parse_selmer_kind(const std::string& text);
int selmer_rank_of(const CurveQ& e, SelmerKind kind);

struct RunConfig {
    Mode mode = Mode::sweep;
    ThetaParams theta = ThetaParams::pi_over_3();
    /// Inclusive n-range for sweep and table1; the single n for analyze.
    std::uint64_t n_min = 1;
    std::uint64_t n_max = 1000;
    /// Grid for hunt: 1 < p, q <= 10^4 and at least four odd prime factors.
    CandidateGrid grid{.pmin = 2, .pmax = 10000, .qmin = 2, .qmax = 10000, .min_omega = 4};
    SieveConfig sieve;
    /// Records with Selmer rank >= this are searched and emitted. Unset
    /// means the mode default (see effective_selmer_min).
    std::optional<int> selmer_min;
    SelmerKind selmer_kind = SelmerKind::isogeny;
    unsigned workers = 1;
    /// Empty: records go to stdout (no checkpointing possible).
    std::string out_path;
    std::string checkpoint_path;
    /// Keys (n for sweep, candidate index for hunt) per flushed block.
    std::uint64_t checkpoint_interval = 1000;
    std::uint64_t height_bound = 1000;

    /// Throws std::invalid_argument on an empty n-range, zero workers or a
    /// zero checkpoint interval. Grids may be empty.
    void validate() const;
    /// sweep: 3; table1: none emitted; hunt: 6 for pi/3, 5 for 2pi/3, else 0.
    int effective_selmer_min() const;
    /// Hex digest of every setting that affects output (not workers, paths
    /// or the checkpoint interval).
    std::string hash() const;
};

/// Applies one key=value setting. Keys: mode, theta, range, n, pmin, pmax,
/// qmin, qmax, min_omega, stages, selmer_min, selmer_kind, workers, out, checkpoint,
/// checkpoint_interval, height_bound ('-' and '_' interchangeable).
/// Throws std::invalid_argument for unknown keys or bad values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Applies every "key = value" line of a file; '#' starts a comment.
void load_config_file(RunConfig& cfg, const std::string& path);

/// Accepts "123", "5e6" and "5*10^6".
std::uint64_t parse_count(const std::string& text);

// JSONL records

std::string record_to_json(const CandidateRecord& rec);
CandidateRecord record_from_json(const std::string& line);

// Runs

/// Cancellation and test hooks for the block runners.
struct RunControl {
    /// Checked between blocks and by workers; a cancelled run leaves the
    /// checkpoint at the last fully flushed block.
    const std::atomic<bool>* cancel = nullptr;
    /// Stop after this many blocks (simulates an interruption).
    std::optional<std::uint64_t> max_blocks;
    /// Called for each emitted record, in output order.
    std::function<void(const CandidateRecord&)> on_record;
};

/// Table 1 cells: s = 0, 1, ..., 5 and s >= 6.
struct SelmerTally {
    std::array<std::uint64_t, 7> cells{};

    void add(int s) { ++cells[s >= 6 ? 6 : s]; }
    std::uint64_t total() const;
};

struct SweepSummary {
    SelmerTally tally;
    std::uint64_t emitted = 0;
    bool completed = false;
    bool resumed = false;
};

struct HuntSummary {
    std::uint64_t candidates = 0;
    std::uint64_t passed_nagao = 0;
    std::uint64_t passed_selmer = 0;
    bool completed = false;
    bool resumed = false;
};

/// Selmer rank of every squarefree n in [n_min, n_max]; n with s at or
/// above the report threshold get a point search and are emitted.
SweepSummary run_sweep(const RunConfig& cfg, const RunControl& ctl = {});

/// Tally only; nothing is emitted.
SweepSummary run_table1(const RunConfig& cfg, const RunControl& ctl = {});

/// Candidates from the grid, then the staged Nagao filter, then the Selmer
/// threshold, then a point search; survivors are emitted.
HuntSummary run_hunt(const RunConfig& cfg, const RunControl& ctl = {});

std::string format_tally(const ThetaParams& theta, const SelmerTally& tally);

// Verification against the published data

struct VerifyCheck {
    std::string entry;
    std::string check;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    /// Upper search bound for the rank of curves listed without generators.
    std::uint64_t search_bound = 1000;
    /// Also compute Selmer ranks of the companion lists.
    bool companion_selmer = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    /// Irregularities in the published lists; informational.
    std::vector<std::string> anomalies;

    bool ok() const;
};

VerifyReport run_verify(const VerifyOptions& opts = {});
std::string format_verify(const VerifyReport& report);

/// Human-readable dump for one curve: coefficients, torsion, Nagao stages,
/// torsor verdicts, points and bounds. Throws for non-squarefree n.
std::string run_analyze(const BigInt& n, const ThetaParams& theta, const SieveConfig& sieve,
                        std::uint64_t height_bound);

}  // namespace thetarank
