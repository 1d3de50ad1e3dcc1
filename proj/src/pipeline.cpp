#include "thetarank/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "thetarank/dataset.hpp"

namespace thetarank {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::sweep: return "sweep";
        case Mode::hunt: return "hunt";
        case Mode::verify: return "verify";
        case Mode::table1: return "table1";
        case Mode::analyze: return "analyze";
    }
    return "?";
}

Mode parse_mode(const std::string& text) {
    for (Mode m : {Mode::sweep, Mode::hunt, Mode::verify, Mode::table1, Mode::analyze})
        if (mode_name(m) == text) return m;
    throw std::invalid_argument("unknown mode '" + text + "'");
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("expected a non-negative integer, got '" + std::string(s) + "'");
    return v;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (b != 0 && a > UINT64_MAX / b) throw std::invalid_argument("count overflows 64 bits");
    return a * b;
}

std::uint64_t pow10(std::uint64_t e) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < e; ++i) v = checked_mul(v, 10);
    return v;
}

int parse_int(const std::string& s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("expected an integer, got '" + s + "'");
    return v;
}

}  // namespace

std::uint64_t parse_count(const std::string& text) {
    const std::string s = trim(text);
    if (auto pos = s.find("*10^"); pos != std::string::npos)
        return checked_mul(parse_u64(std::string_view(s).substr(0, pos)), pow10(parse_u64(std::string_view(s).substr(pos + 4))));
    if (auto pos = s.find_first_of("eE"); pos != std::string::npos)
        return checked_mul(parse_u64(std::string_view(s).substr(0, pos)), pow10(parse_u64(std::string_view(s).substr(pos + 1))));
    return parse_u64(s);
}

void RunConfig::validate() const {
    if (n_min < 1 || n_min > n_max) throw std::invalid_argument("n-range must satisfy 1 <= lo <= hi");
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    if (checkpoint_interval < 1) throw std::invalid_argument("checkpoint interval must be >= 1");
    if (grid.pmin < 1 || grid.qmin < 1) throw std::invalid_argument("grid lower bounds must be >= 1");
    if (!checkpoint_path.empty() && out_path.empty())
        throw std::invalid_argument("a checkpoint needs an output file");
}

std::string selmer_kind_name(SelmerKind k) { return k == SelmerKind::isogeny ? "isogeny" : "full"; }

SelmerKind parse_selmer_kind(const std::string& text) {
    if (text == "isogeny") return SelmerKind::isogeny;
    if (text == "full") return SelmerKind::full;
    throw std::invalid_argument("unknown Selmer kind '" + text + "' (isogeny or full)");
}

int selmer_rank_of(const CurveQ& e, SelmerKind kind) {
    return kind == SelmerKind::isogeny ? selmer_rank(e) : two_selmer_rank(e);
}

int RunConfig::effective_selmer_min() const {
    if (selmer_min) return *selmer_min;
    if (mode == Mode::hunt) {
        if (theta.is_pi_over_3()) return 6;
        if (theta.is_two_pi_over_3()) return 5;
        return 0;
    }
    return 3;
}

std::string RunConfig::hash() const {
    std::ostringstream canon;
    canon << mode_name(mode) << '|' << theta.name() << '|' << effective_selmer_min() << '|' << height_bound << '|';
    if (selmer_kind != SelmerKind::isogeny) canon << selmer_kind_name(selmer_kind) << '|';
    if (mode == Mode::hunt)
        canon << grid.pmin << ':' << grid.pmax << ':' << grid.qmin << ':' << grid.qmax << ':' << grid.min_omega << '|'
              << sieve.to_string();
    else
        canon << n_min << ':' << n_max;
    // FNV-1a, 64-bit.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canon.str()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& raw_value) {
    std::string key = trim(raw_key);
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = trim(raw_value);
    if (key == "mode") {
        cfg.mode = parse_mode(value);
    } else if (key == "theta") {
        cfg.theta = ThetaParams::parse(value);
    } else if (key == "range") {
        const auto colon = value.find(':');
        if (colon == std::string::npos) {
            cfg.n_min = 1;
            cfg.n_max = parse_count(value);
        } else {
            cfg.n_min = parse_count(value.substr(0, colon));
            cfg.n_max = parse_count(value.substr(colon + 1));
        }
    } else if (key == "n") {
        cfg.n_min = cfg.n_max = parse_count(value);
    } else if (key == "pmin") {
        cfg.grid.pmin = parse_count(value);
    } else if (key == "pmax") {
        cfg.grid.pmax = parse_count(value);
    } else if (key == "qmin") {
        cfg.grid.qmin = parse_count(value);
    } else if (key == "qmax") {
        cfg.grid.qmax = parse_count(value);
    } else if (key == "min_omega") {
        cfg.grid.min_omega = parse_int(value);
    } else if (key == "stages") {
        cfg.sieve = SieveConfig::parse(value);
    } else if (key == "selmer_min") {
        cfg.selmer_min = parse_int(value);
    } else if (key == "selmer_kind") {
        cfg.selmer_kind = parse_selmer_kind(value);
    } else if (key == "workers") {
        cfg.workers = static_cast<unsigned>(parse_u64(value));
    } else if (key == "out") {
        cfg.out_path = value;
    } else if (key == "checkpoint") {
        cfg.checkpoint_path = value;
    } else if (key == "checkpoint_interval") {
        cfg.checkpoint_interval = parse_count(value);
    } else if (key == "height_bound") {
        cfg.height_bound = parse_count(value);
    } else {
        throw std::invalid_argument("unknown setting '" + raw_key + "'");
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
        try {
            apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::invalid_argument& err) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + err.what());
        }
    }
}

// ---------------------------------------------------------------------------
// Records

std::string record_to_json(const CandidateRecord& rec) {
    json j;
    j["n"] = rec.n.get_str();
    j["theta"] = rec.theta.name();
    json prov = json::array();
    for (const auto& [p, q] : rec.provenance) prov.push_back({p, q});
    j["provenance"] = prov;
    j["omega"] = rec.omega_odd;
    json nagao = json::object();
    for (const auto& [bound, value] : rec.nagao_values) nagao[std::to_string(bound)] = value;
    j["nagao"] = nagao;
    j["selmer"] = rec.selmer ? json(*rec.selmer) : json(nullptr);
    j["rank_lb"] = rec.rank_lb ? json(*rec.rank_lb) : json(nullptr);
    j["rank_ub"] = rec.rank_ub ? json(*rec.rank_ub) : json(nullptr);
    json pts = json::array();
    for (const auto& p : rec.points) pts.push_back({format_rational(p.x), format_rational(p.y)});
    j["points"] = pts;
    return j.dump();
}

CandidateRecord record_from_json(const std::string& line) {
    const json j = json::parse(line);
    CandidateRecord rec;
    rec.n = BigInt(j.at("n").get<std::string>());
    rec.theta = ThetaParams::parse(j.at("theta").get<std::string>());
    for (const auto& pq : j.at("provenance")) rec.provenance.emplace_back(pq.at(0).get<std::uint64_t>(), pq.at(1).get<std::uint64_t>());
    rec.omega_odd = j.at("omega").get<int>();
    for (const auto& [bound, value] : j.at("nagao").items())
        rec.nagao_values[static_cast<std::uint32_t>(parse_u64(bound))] = value.get<double>();
    auto opt_int = [&](const char* key) -> std::optional<int> {
        if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
        return j.at(key).get<int>();
    };
    rec.selmer = opt_int("selmer");
    rec.rank_lb = opt_int("rank_lb");
    rec.rank_ub = opt_int("rank_ub");
    for (const auto& p : j.at("points")) rec.points.push_back(PointQ::parse(p.at(0).get<std::string>(), p.at(1).get<std::string>()));
    return rec;
}

// ---------------------------------------------------------------------------
// Ordered block runner

namespace {

struct Checkpoint {
    std::string config_hash;
    std::uint64_t next_key = 0;
    std::uint64_t out_bytes = 0;
    std::vector<std::uint64_t> counters;
};

std::optional<Checkpoint> read_checkpoint(const std::string& path) {
    if (path.empty() || !std::filesystem::exists(path)) return std::nullopt;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint " + path);
    const json j = json::parse(in);
    return Checkpoint{j.at("config_hash").get<std::string>(), j.at("next_key").get<std::uint64_t>(),
                      j.at("out_bytes").get<std::uint64_t>(), j.at("counters").get<std::vector<std::uint64_t>>()};
}

void write_checkpoint(const std::string& path, const Checkpoint& cp, std::uint64_t last_key) {
    json j;
    j["config_hash"] = cp.config_hash;
    j["next_key"] = cp.next_key;
    j["last_flushed_key"] = cp.next_key == 0 ? json(nullptr) : json(cp.next_key - 1);
    j["complete"] = cp.next_key > last_key;
    j["out_bytes"] = cp.out_bytes;
    j["counters"] = cp.counters;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << j.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

struct BlockOutcome {
    bool completed = false;
    bool resumed = false;
};

// Processes keys first..last in blocks of cfg.checkpoint_interval. `work` runs
// on worker threads; `fold` runs on the calling thread in key order, updates
// the counters and returns the record to emit, if any.
template <class Result, class Work, class Fold>
BlockOutcome run_blocks(const RunConfig& cfg, const RunControl& ctl, std::uint64_t first, std::uint64_t last,
                        std::vector<std::uint64_t>& counters, Work work, Fold fold) {
    BlockOutcome outcome;
    const std::string hash = cfg.hash();
    std::uint64_t next = first;

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!cfg.out_path.empty()) {
        std::optional<Checkpoint> cp = read_checkpoint(cfg.checkpoint_path);
        if (cp) {
            if (cp->config_hash != hash)
                throw std::runtime_error("checkpoint " + cfg.checkpoint_path + " belongs to a different configuration");
            if (cp->counters.size() != counters.size()) throw std::runtime_error("checkpoint counters are malformed");
            if (!std::filesystem::exists(cfg.out_path) || std::filesystem::file_size(cfg.out_path) < cp->out_bytes)
                throw std::runtime_error("output " + cfg.out_path + " is shorter than its checkpoint");
            std::filesystem::resize_file(cfg.out_path, cp->out_bytes);
            file.open(cfg.out_path, std::ios::app | std::ios::binary);
            next = cp->next_key;
            counters = cp->counters;
            outcome.resumed = true;
        } else {
            file.open(cfg.out_path, std::ios::trunc | std::ios::binary);
        }
        if (!file) throw std::runtime_error("cannot open output " + cfg.out_path);
        out = &file;
    }

    auto cancelled = [&] { return ctl.cancel && ctl.cancel->load(); };
    std::uint64_t blocks = 0;
    while (last >= first && next <= last) {
        if (cancelled()) return outcome;
        if (ctl.max_blocks && blocks >= *ctl.max_blocks) return outcome;
        const std::uint64_t span = std::min(cfg.checkpoint_interval - 1, last - next);
        const std::uint64_t count = span + 1;
        std::vector<std::optional<Result>> results(count);
        std::atomic<std::uint64_t> index{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::uint64_t i; (i = index.fetch_add(1)) < count;) {
                if (cancelled()) return;
                try {
                    results[i] = work(next + i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    index.store(count);
                    return;
                }
            }
        };
        const auto nthreads = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, count));
        if (nthreads <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        if (failure) std::rethrow_exception(failure);
        if (std::any_of(results.begin(), results.end(), [](const auto& r) { return !r.has_value(); })) return outcome;

        for (auto& r : results) {
            if (std::optional<CandidateRecord> rec = fold(std::move(*r), counters)) {
                *out << record_to_json(*rec) << '\n';
                if (ctl.on_record) ctl.on_record(*rec);
            }
        }
        out->flush();
        if (!*out) throw std::runtime_error("write to " + (cfg.out_path.empty() ? "stdout" : cfg.out_path) + " failed");
        next += count;
        ++blocks;
        if (!cfg.checkpoint_path.empty())
            write_checkpoint(cfg.checkpoint_path, {hash, next, static_cast<std::uint64_t>(file.tellp()), counters}, last);
        if (next == 0) break;  // wrapped past UINT64_MAX
    }
    outcome.completed = true;
    return outcome;
}

// Point search aimed at `target` independent points; returns a basis.
std::vector<PointQ> find_generators(const CurveQ& e, int target, std::uint64_t height_bound) {
    if (height_bound == 0 || target <= 0) return {};
    const auto found = search_points(e, SearchOptions{.height_bound = height_bound, .target_rank = target});
    return independent_points(found, e);
}

struct SweepResult {
    bool squarefree = false;
    int selmer = 0;
    std::optional<CandidateRecord> record;
};

SweepSummary sweep_impl(const RunConfig& cfg, const RunControl& ctl, bool emit) {
    cfg.validate();
    const int threshold = cfg.effective_selmer_min();
    std::vector<std::uint64_t> counters(8, 0);  // 7 tally cells, then emitted
    auto work = [&](std::uint64_t key) {
        SweepResult r;
        const BigInt n = static_cast<unsigned long>(key);
        if (!is_squarefree(n)) return r;
        r.squarefree = true;
        const CurveQ e = build_curve(n, cfg.theta);
        r.selmer = selmer_rank_of(e, cfg.selmer_kind);
        if (emit && r.selmer >= threshold) {
            CandidateRecord rec{.n = n, .theta = cfg.theta, .omega_odd = omega_odd(n)};
            rec.selmer = r.selmer;
            rec.rank_ub = cfg.selmer_kind == SelmerKind::full ? r.selmer : two_selmer_rank(e);
            rec.points = find_generators(e, *rec.rank_ub, cfg.height_bound);
            rec.rank_lb = static_cast<int>(rec.points.size());
            r.record = std::move(rec);
        }
        return r;
    };
    auto fold = [](SweepResult&& r, std::vector<std::uint64_t>& c) -> std::optional<CandidateRecord> {
        if (!r.squarefree) return std::nullopt;
        ++c[std::min(r.selmer, 6)];
        if (r.record) ++c[7];
        return std::move(r.record);
    };
    const BlockOutcome o = run_blocks<SweepResult>(cfg, ctl, cfg.n_min, cfg.n_max, counters, work, fold);
    SweepSummary summary;
    std::copy_n(counters.begin(), 7, summary.tally.cells.begin());
    summary.emitted = counters[7];
    summary.completed = o.completed;
    summary.resumed = o.resumed;
    return summary;
}

}  // namespace

std::uint64_t SelmerTally::total() const {
    std::uint64_t t = 0;
    for (auto c : cells) t += c;
    return t;
}

SweepSummary run_sweep(const RunConfig& cfg, const RunControl& ctl) { return sweep_impl(cfg, ctl, true); }

SweepSummary run_table1(const RunConfig& cfg, const RunControl& ctl) { return sweep_impl(cfg, ctl, false); }

HuntSummary run_hunt(const RunConfig& cfg, const RunControl& ctl) {
    cfg.validate();
    const int threshold = cfg.effective_selmer_min();
    const std::vector<CandidateRecord> candidates = generate_candidates(cfg.grid, cfg.theta);
    struct HuntResult {
        bool nagao = false;
        bool selmer = false;
        std::optional<CandidateRecord> record;
    };
    std::vector<std::uint64_t> counters(2, 0);  // passed nagao, passed selmer
    auto work = [&](std::uint64_t key) {
        HuntResult r;
        CandidateRecord rec = candidates[key];
        const CurveQ e = build_curve(rec.n, cfg.theta);
        const FilterResult f = passes_filter(e, cfg.sieve);
        for (const auto& v : f.values) rec.nagao_values[v.bound] = v.value;
        if (!f.passed) return r;
        r.nagao = true;
        const int s = selmer_rank_of(e, cfg.selmer_kind);
        if (s < threshold) return r;
        r.selmer = true;
        rec.selmer = s;
        rec.rank_ub = cfg.selmer_kind == SelmerKind::full ? s : two_selmer_rank(e);
        rec.points = find_generators(e, *rec.rank_ub, cfg.height_bound);
        rec.rank_lb = static_cast<int>(rec.points.size());
        r.record = std::move(rec);
        return r;
    };
    auto fold = [](HuntResult&& r, std::vector<std::uint64_t>& c) -> std::optional<CandidateRecord> {
        c[0] += r.nagao;
        c[1] += r.selmer;
        return std::move(r.record);
    };
    HuntSummary summary;
    summary.candidates = candidates.size();
    // An empty grid gives the empty key range [1, 0]: the output is created and nothing runs.
    const BlockOutcome o = candidates.empty()
                               ? run_blocks<HuntResult>(cfg, ctl, 1, 0, counters, work, fold)
                               : run_blocks<HuntResult>(cfg, ctl, 0, candidates.size() - 1, counters, work, fold);
    summary.passed_nagao = counters[0];
    summary.passed_selmer = counters[1];
    summary.completed = o.completed;
    summary.resumed = o.resumed;
    return summary;
}

std::string format_tally(const ThetaParams& theta, const SelmerTally& tally) {
    std::ostringstream out;
    out << std::left << std::setw(8) << "s" << std::right;
    for (const char* h : {"0", "1", "2", "3", "4", "5", ">=6", "Total"}) out << std::setw(10) << h;
    out << '\n' << std::left << std::setw(8) << theta.name() << std::right;
    for (auto c : tally.cells) out << std::setw(10) << c;
    out << std::setw(10) << tally.total() << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Verification

bool VerifyReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

namespace {

std::string entry_name(const std::string& n, const ThetaParams& theta) { return "n=" + n + " " + theta.name(); }

void verify_curve(const PublishedCurve& pc, VerifyReport& report) {
    const std::string name = entry_name(pc.n, pc.theta);
    auto check = [&](std::string what, bool ok, std::string detail) {
        report.checks.push_back({name, std::move(what), ok, std::move(detail)});
    };
    const CurveQ e = build_curve(BigInt(pc.n), pc.theta);
    const bool coeffs = e.a2 == BigInt(pc.a2) && e.a4 == BigInt(pc.a4);
    check("coefficients", coeffs, e.equation());
    if (!pc.printed_n.empty()) {
        const CurveQ printed = build_curve(BigInt(pc.printed_n), pc.theta);
        const bool differs = printed.a2 != BigInt(pc.a2) || printed.a4 != BigInt(pc.a4);
        report.anomalies.push_back("n=" + pc.printed_n + " " + pc.theta.name() + ": the printed equation belongs to n=" + pc.n +
                                   (differs ? "" : " (but also matches the printed n)"));
    }
    std::vector<PointQ> gens;
    std::size_t on_curve = 0;
    for (const auto& [x, y] : pc.generators) {
        try {
            PointQ p = PointQ::parse(x, y);
            if (is_on_curve(p, e)) ++on_curve;
            gens.push_back(std::move(p));
        } catch (const std::invalid_argument&) {
        }
    }
    check("on-curve", on_curve == pc.generators.size(),
          std::to_string(on_curve) + "/" + std::to_string(pc.generators.size()) + " generators");
    if (on_curve == pc.generators.size()) {
        const int lb = rank_lower_bound(gens, e);
        check("rank_lb", lb == pc.rank, "rank_lb = " + std::to_string(lb) + ", published rank " + std::to_string(pc.rank));
    } else {
        check("rank_lb", false, "skipped: generators not on the curve");
    }
    const int s = selmer_rank(e);
    if (pc.selmer)
        check("selmer", s == *pc.selmer, "selmer = " + std::to_string(s) + ", published " + std::to_string(*pc.selmer));
    check("selmer >= rank", s >= pc.rank, "selmer = " + std::to_string(s));
    const int s2 = two_selmer_rank(e);
    check("2-selmer", s2 >= pc.rank && s2 <= s,
          "2-selmer = " + std::to_string(s2) + ", between rank " + std::to_string(pc.rank) + " and selmer " + std::to_string(s));
}

void verify_bound(const PublishedBound& pb, const VerifyOptions& opts, VerifyReport& report) {
    const std::string name = entry_name(pb.n, pb.theta);
    const CurveQ e = build_curve(BigInt(pb.n), pb.theta);
    const DescentReport d = run_descent_iterative(e, opts.search_bound);
    if (pb.selmer)
        report.checks.push_back({name, "selmer", d.selmer_rank == *pb.selmer,
                                 "selmer = " + std::to_string(d.selmer_rank) + ", published " + std::to_string(*pb.selmer)});
    if (pb.rank) {
        report.checks.push_back({name, "rank_lb", d.rank_lb == *pb.rank,
                                 "rank_lb = " + std::to_string(d.rank_lb) + " (search to " + std::to_string(opts.search_bound) +
                                     "), published rank " + std::to_string(*pb.rank)});
        report.checks.push_back({name, "selmer >= rank", d.selmer_rank >= *pb.rank, "selmer = " + std::to_string(d.selmer_rank)});
        report.checks.push_back({name, "2-selmer", d.two_selmer_rank >= *pb.rank && d.two_selmer_rank <= d.selmer_rank,
                                 "2-selmer = " + std::to_string(d.two_selmer_rank)});
    }
}

void verify_companions(const CompanionList& list, const VerifyOptions& opts, VerifyReport& report) {
    std::set<std::string> seen, dup;
    std::vector<std::string> unique;
    for (const auto& n : list.entries) {
        if (!seen.insert(n).second)
            dup.insert(n);
        else
            unique.push_back(n);
    }
    const std::string where = list.label + " list";
    for (const auto& n : dup) report.anomalies.push_back(where + ": " + n + " appears more than once");
    report.anomalies.push_back(where + ": " + std::to_string(list.entries.size()) + " entries as printed, " +
                               std::to_string(unique.size()) + " distinct");
    for (const auto& pc : published_curves())
        if (pc.theta == list.theta && seen.count(pc.n))
            report.anomalies.push_back(where + ": " + pc.n + " is also the curve listed with generators");
    for (const auto& n : unique) {
        // A square factor m^2 of n only rescales the curve, so the squarefree
        // part names the same curve up to isomorphism.
        const BigInt v = squarefree_part(BigInt(n));
        if (v != BigInt(n))
            report.anomalies.push_back(where + ": " + n + " is not squarefree; its squarefree part is " + v.get_str());
        if (!opts.companion_selmer) continue;
        const int s = selmer_rank(build_curve(v, list.theta));
        const bool ok = list.is_selmer ? s == list.value : s >= list.value;
        report.checks.push_back({entry_name(n, list.theta), where + (list.is_selmer ? " selmer" : " selmer >= rank"), ok,
                                 "selmer = " + std::to_string(s) + ", 2-selmer = " +
                                     std::to_string(two_selmer_rank(build_curve(v, list.theta))) + ", odd prime factors " +
                                     std::to_string(omega_odd(v))});
    }
}

}  // namespace

VerifyReport run_verify(const VerifyOptions& opts) {
    VerifyReport report;
    for (const auto& pc : published_curves()) verify_curve(pc, report);
    for (const auto& pb : published_bounds()) verify_bound(pb, opts, report);
    for (const auto& list : companion_lists()) verify_companions(list, opts, report);
    return report;
}

std::string format_verify(const VerifyReport& report) {
    std::ostringstream out;
    for (const auto& c : report.checks) {
        out << (c.passed ? "ok   " : "FAIL ") << c.entry << "  " << c.check;
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << '\n';
    }
    for (const auto& a : report.anomalies) out << "note " << a << '\n';
    const auto failed = std::count_if(report.checks.begin(), report.checks.end(), [](const VerifyCheck& c) { return !c.passed; });
    out << report.checks.size() - failed << "/" << report.checks.size() << " checks passed\n";
    return out.str();
}

// ---------------------------------------------------------------------------
// Analyze

std::string run_analyze(const BigInt& n, const ThetaParams& theta, const SieveConfig& sieve, std::uint64_t height_bound) {
    const CurveQ e = build_curve(n, theta);
    std::ostringstream out;
    out << "curve      " << e.equation() << '\n';
    out << "n          " << n.get_str() << " (odd prime factors: " << omega_odd(n) << ")\n";
    out << "disc       " << e.disc.get_str() << '\n';
    out << "torsion    ";
    const auto torsion = torsion_points(e);
    for (std::size_t i = 0; i < torsion.size(); ++i) out << (i ? " " : "") << format_point(torsion[i]);
    out << "  (order " << torsion.size() << ")\n";

    out << "nagao\n";
    for (const auto& stage : sieve.stages()) {
        const double v = nagao_sum(e, stage.bound);
        out << "  S(" << stage.bound << ") = " << std::fixed << std::setprecision(4) << v << "  threshold " << stage.threshold
            << (v > stage.threshold ? "  pass" : "  fail") << '\n';
    }
    out.unsetf(std::ios::fixed);

    const IsogenyPair pair = IsogenyPair::of(e);
    std::size_t sizes[2] = {0, 0};
    for (IsogenySide side : {IsogenySide::forward, IsogenySide::dual}) {
        const IsogenyPair& curve = side == IsogenySide::forward ? pair : pair.dual();
        const auto verdicts = phi_selmer_verdicts(pair, side);
        std::size_t members = 0;
        out << (side == IsogenySide::forward ? "torsors on E " : "torsors on E'") << "  w^2 = d u^4 + " << curve.a.get_str()
            << " u^2 v^2 + (" << curve.b.get_str() << "/d) v^4\n";
        for (const auto& v : verdicts) {
            members += v.in_selmer;
            out << "  d = " << std::setw(14) << v.d.value().get_str() << (v.in_selmer ? "  in   " : "  out  ");
            for (const auto& pv : v.places) out << ' ' << pv.place << (pv.solvable ? "+" : "-");
            out << '\n';
        }
        sizes[side == IsogenySide::forward ? 0 : 1] = members;
        out << "  selmer group size " << members << '\n';
    }

    const DescentReport d = run_descent(e, height_bound);
    out << "selmer     " << d.selmer_rank << "  (|S| = " << sizes[0] << ", |S'| = " << sizes[1] << ")\n";
    out << "2-selmer   " << d.two_selmer_rank << "  (complete 2-descent)\n";
    const auto basis = independent_points(d.points_found, e);
    out << "points     " << d.points_found.size() << " found up to height " << height_bound << ", independent:\n";
    for (const auto& p : basis) out << "  " << format_point(p) << '\n';
    out << "rank       " << d.rank_lb << " <= r <= " << d.two_selmer_rank << '\n';
    return out.str();
}

}  // namespace thetarank
