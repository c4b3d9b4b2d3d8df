#include "tvpce/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "tvpce/errors.hpp"
#include "tvpce/pce_digital.hpp"
#include "tvpce/pce_hybrid.hpp"

namespace tvpce {

namespace {

const char* const csv_header =
    "run_id,snr_db,l_true,l_hat,rel_err,time_total_ms,time_cp_ms,time_mdl_ms,time_paths_ms,seed,error";

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t run, std::uint64_t stream)
{
    return splitmix64(splitmix64(splitmix64(base) ^ run) ^ stream);
}

// Shortest representation that reads back to the same double.
std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c == '\n' || c == '\r' ? ' ' : c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted)
        throw IoError("csv: unterminated quote");
    return fields;
}

template <class T>
T parse_number(const std::string& s)
{
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw IoError("csv: malformed number '" + s + "'");
    return v;
}

} // namespace

const char* to_string(Architecture a)
{
    return a == Architecture::digital ? "digital" : "hybrid";
}

Architecture parse_architecture(const std::string& s)
{
    if (s == "digital")
        return Architecture::digital;
    if (s == "hybrid")
        return Architecture::hybrid;
    throw ConfigError("mode must be 'digital' or 'hybrid', got '" + s + "'");
}

void CampaignConfig::validate() const
{
    if (mc_runs == 0)
        throw ConfigError("mc_runs must be at least 1");
    if (snr_db_list.empty())
        throw ConfigError("the SNR list is empty");
    for (double s : snr_db_list)
        if (std::isnan(s) || s == -INFINITY)
            throw ConfigError("SNR values must be numbers or +inf");
    if (workers == 0)
        throw ConfigError("workers must be at least 1");
    if (channel.l == 0)
        throw ConfigError("the channel needs at least one path");
    try {
        if (mode == Architecture::hybrid)
            system.validate_hybrid();
        else
            system.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

Scenario make_scenario(const CampaignConfig& cfg, std::size_t run_id, std::size_t snr_index)
{
    if (snr_index >= cfg.snr_db_list.size())
        throw std::out_of_range("make_scenario: SNR index out of range");
    Scenario s;
    s.channel_seed = cfg.base_seed + run_id;
    s.pilot_seed = cfg.pilot_seed ? *cfg.pilot_seed : derive_seed(cfg.base_seed, run_id, 1);
    s.noise_seed = derive_seed(cfg.base_seed, run_id, 2 + snr_index);

    ChannelGenConfig ch = cfg.channel;
    ch.seed = s.channel_seed;
    s.truth = draw_channel(ch);
    s.h = channel_tensor(s.truth, cfg.system);
    const double snr = cfg.snr_db_list[snr_index];
    if (cfg.mode == Architecture::digital) {
        const PilotDigital p = make_pilot_digital(cfg.system, s.pilot_seed);
        s.n0 = snr_to_n0(s.h, p, snr);
        s.observation = receive_digital(s.h, p, s.n0, s.noise_seed).a;
        s.pilot = p;
    } else {
        const PilotHybrid p = make_pilot_hybrid(cfg.system, s.pilot_seed);
        s.n0 = snr_to_n0(s.h, p, snr);
        s.observation = receive_hybrid(s.h, p, s.n0, s.noise_seed);
        s.pilot = p;
    }
    return s;
}

EstimationResult estimate_scenario(const Scenario& s, const EstimatorConfig& cfg)
{
    if (const auto* p = std::get_if<PilotDigital>(&s.pilot))
        return estimate_digital(s.observation, *p, cfg);
    return estimate_hybrid(s.observation, std::get<PilotHybrid>(s.pilot), cfg);
}

RunRecord run_single(const CampaignConfig& cfg, std::size_t run_id, std::size_t snr_index)
{
    RunRecord rec;
    rec.run_id = run_id;
    rec.snr_db = cfg.snr_db_list.at(snr_index);
    rec.seed = cfg.base_seed + run_id;
    rec.l_true = cfg.channel.l;
    try {
        const Scenario s = make_scenario(cfg, run_id, snr_index);
        const EstimationResult r = estimate_scenario(s, cfg.estimator);
        rec.l_hat = r.l_hat;
        rec.rel_err = relative_error(s.h, r.h_hat);
        rec.time_total_ms = r.timings.total_ms;
        rec.time_cp_ms = r.timings.cp_ms;
        rec.time_mdl_ms = r.timings.model_order_ms;
        rec.time_paths_ms = r.timings.per_path_total_ms;
        if (!std::isfinite(rec.rel_err))
            throw std::domain_error("non-finite channel error");
    } catch (const std::exception& e) {
        rec.rel_err = failed_run_rel_err;
        rec.error = e.what();
        if (rec.error.empty())
            rec.error = "unknown error";
    }
    return rec;
}

CampaignResult run_campaign(const CampaignConfig& cfg)
{
    cfg.validate();
    const std::size_t jobs = cfg.snr_db_list.size() * cfg.mc_runs;
    std::vector<RunRecord> records(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs; j = next++)
            records[j] = run_single(cfg, j % cfg.mc_runs, j / cfg.mc_runs);
    };
    const std::size_t threads = std::min(cfg.workers, jobs);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < threads; ++i)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        return a.snr_db != b.snr_db ? a.snr_db < b.snr_db : a.run_id < b.run_id;
    });
    CampaignResult out;
    out.summary = summarize(records);
    out.records = std::move(records);
    return out;
}

double median(std::vector<double> v)
{
    if (v.empty())
        throw std::invalid_argument("median of an empty set");
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1)
        return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

std::vector<SnrSummary> summarize(const std::vector<RunRecord>& records)
{
    std::map<double, std::vector<const RunRecord*>> by_snr;
    for (const auto& r : records)
        by_snr[r.snr_db].push_back(&r);
    std::vector<SnrSummary> out;
    for (const auto& [snr, group] : by_snr) {
        SnrSummary s;
        s.snr_db = snr;
        s.runs = group.size();
        std::vector<double> errs;
        double cp = 0.0, total = 0.0;
        for (const RunRecord* r : group) {
            errs.push_back(r->rel_err);
            s.mean_rel_err += r->rel_err;
            ++s.l_hat_histogram[r->l_hat];
            if (!r->error.empty())
                ++s.failures;
            cp += r->time_cp_ms;
            total += r->time_total_ms;
        }
        s.mean_rel_err /= static_cast<double>(group.size());
        s.median_rel_err = median(std::move(errs));
        s.cp_time_share = total > 0.0 ? cp / total : 0.0;
        out.push_back(std::move(s));
    }
    return out;
}

void write_csv(std::ostream& os, const std::vector<RunRecord>& records)
{
    os << csv_header << '\n';
    for (const auto& r : records) {
        os << r.run_id << ',' << format_double(r.snr_db) << ',' << r.l_true << ',' << r.l_hat << ','
           << format_double(r.rel_err) << ',' << format_double(r.time_total_ms) << ','
           << format_double(r.time_cp_ms) << ',' << format_double(r.time_mdl_ms) << ','
           << format_double(r.time_paths_ms) << ',' << r.seed << ',' << csv_escape(r.error) << '\n';
    }
}

void save_csv(const std::string& path, const std::vector<RunRecord>& records)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open '" + path + "' for writing");
    write_csv(os, records);
    os.flush();
    if (!os)
        throw IoError("failed writing '" + path + "'");
}

std::vector<RunRecord> read_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != csv_header)
        throw IoError("csv: missing or unexpected header");
    std::vector<RunRecord> out;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != 11)
            throw IoError("csv: expected 11 fields, got " + std::to_string(f.size()));
        RunRecord r;
        r.run_id = parse_number<std::size_t>(f[0]);
        r.snr_db = parse_number<double>(f[1]);
        r.l_true = parse_number<std::size_t>(f[2]);
        r.l_hat = parse_number<std::size_t>(f[3]);
        r.rel_err = parse_number<double>(f[4]);
        r.time_total_ms = parse_number<double>(f[5]);
        r.time_cp_ms = parse_number<double>(f[6]);
        r.time_mdl_ms = parse_number<double>(f[7]);
        r.time_paths_ms = parse_number<double>(f[8]);
        r.seed = parse_number<std::uint64_t>(f[9]);
        r.error = f[10];
        out.push_back(std::move(r));
    }
    return out;
}

void write_summary(std::ostream& os, const std::vector<SnrSummary>& summary)
{
    for (const auto& s : summary) {
        os << "snr " << format_double(s.snr_db) << " dB: runs " << s.runs << ", failures " << s.failures
           << ", mean rel_err " << format_double(s.mean_rel_err) << ", median rel_err "
           << format_double(s.median_rel_err) << ", l_hat {";
        bool first = true;
        for (const auto& [l, n] : s.l_hat_histogram) {
            os << (first ? "" : ", ") << l << ": " << n;
            first = false;
        }
        os << "}\n";
    }
}

std::optional<std::string> cp_share_warning(const std::vector<SnrSummary>& summary)
{
    for (const auto& s : summary)
        if (s.cp_time_share <= 0.5) {
            std::ostringstream msg;
            msg << "CP stage took " << std::lround(100.0 * s.cp_time_share) << "% of the run time at "
                << format_double(s.snr_db) << " dB (expected to dominate at full scale)";
            return msg.str();
        }
    return std::nullopt;
}

} // namespace tvpce
