#include "tvpce/campaign_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "tvpce/errors.hpp"

namespace tvpce {

namespace {

using Setter = std::function<void(CampaignConfig&, const std::string&)>;

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

[[noreturn]] void bad_value(const std::string& v, const char* what)
{
    throw ConfigError("'" + v + "' is not " + what);
}

std::uint64_t to_uint(const std::string& v)
{
    std::uint64_t out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
        bad_value(v, "a non-negative integer");
    return out;
}

std::size_t to_size(const std::string& v)
{
    return static_cast<std::size_t>(to_uint(v));
}

double to_double(const std::string& v)
{
    // from_chars accepts "inf" and "nan"; both are filtered by the callers.
    double out = 0.0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
        bad_value(v, "a number");
    return out;
}

double to_finite(const std::string& v)
{
    const double d = to_double(v);
    if (!std::isfinite(d))
        bad_value(v, "a finite number");
    return d;
}

bool to_bool(const std::string& v)
{
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    bad_value(v, "a boolean");
}

const std::map<std::string, std::map<std::string, Setter>>& schema()
{
    static const std::map<std::string, std::map<std::string, Setter>> s = {
        {"system",
         {
             {"mode", [](CampaignConfig& c, const std::string& v) { c.mode = parse_architecture(v); }},
             {"n_c", [](CampaignConfig& c, const std::string& v) { c.system.n_c = to_size(v); }},
             {"n_s", [](CampaignConfig& c, const std::string& v) { c.system.n_s = to_size(v); }},
             {"n_r", [](CampaignConfig& c, const std::string& v) { c.system.n_r = to_size(v); }},
             {"n_t", [](CampaignConfig& c, const std::string& v) { c.system.n_t = to_size(v); }},
             {"d", [](CampaignConfig& c, const std::string& v) { c.system.d_t = c.system.d_r = to_size(v); }},
             {"d_t", [](CampaignConfig& c, const std::string& v) { c.system.d_t = to_size(v); }},
             {"d_r", [](CampaignConfig& c, const std::string& v) { c.system.d_r = to_size(v); }},
             {"n_a_t", [](CampaignConfig& c, const std::string& v) { c.system.n_a_t = to_size(v); }},
             {"n_a_r", [](CampaignConfig& c, const std::string& v) { c.system.n_a_r = to_size(v); }},
         }},
        {"channel",
         {
             {"l", [](CampaignConfig& c, const std::string& v) { c.channel.l = to_size(v); }},
             {"rician_noncentrality",
              [](CampaignConfig& c, const std::string& v) { c.channel.rician_noncentrality = to_finite(v); }},
             {"rician_scale", [](CampaignConfig& c, const std::string& v) { c.channel.rician_scale = to_finite(v); }},
             {"los_boost_db", [](CampaignConfig& c, const std::string& v) { c.channel.los_boost_db = to_finite(v); }},
             {"min_separation",
              [](CampaignConfig& c, const std::string& v) { c.channel.min_separation = to_finite(v); }},
         }},
        {"pilot",
         {
             {"seed", [](CampaignConfig& c, const std::string& v) { c.pilot_seed = to_uint(v); }},
         }},
        {"noise",
         {
             {"snr_db", [](CampaignConfig& c, const std::string& v) { c.snr_db_list = parse_snr_list(v); }},
         }},
        {"estimator",
         {
             {"cp_max_iters", [](CampaignConfig& c, const std::string& v) { c.estimator.cp.max_iters = to_size(v); }},
             {"cp_rel_tol", [](CampaignConfig& c, const std::string& v) { c.estimator.cp.rel_tol = to_finite(v); }},
             {"cp_restarts", [](CampaignConfig& c, const std::string& v) { c.estimator.cp.restarts = to_size(v); }},
             {"acd_max_sweeps",
              [](CampaignConfig& c, const std::string& v) { c.estimator.acd.max_sweeps = to_size(v); }},
             {"acd_rel_tol", [](CampaignConfig& c, const std::string& v) { c.estimator.acd.rel_tol = to_finite(v); }},
             {"acd_starts", [](CampaignConfig& c, const std::string& v) { c.estimator.acd.starts = to_size(v); }},
             {"acd_grid_oversample",
              [](CampaignConfig& c, const std::string& v) { c.estimator.acd.grid_oversample = to_size(v); }},
             {"refine", [](CampaignConfig& c, const std::string& v) { c.estimator.refine = to_bool(v); }},
             {"parallel_paths",
              [](CampaignConfig& c, const std::string& v) { c.estimator.parallel_paths = to_bool(v); }},
         }},
        {"mc",
         {
             {"runs", [](CampaignConfig& c, const std::string& v) { c.mc_runs = to_size(v); }},
             {"seed", [](CampaignConfig& c, const std::string& v) { c.base_seed = to_uint(v); }},
             {"workers", [](CampaignConfig& c, const std::string& v) { c.workers = to_size(v); }},
         }},
        {"output",
         {
             {"csv", [](CampaignConfig& c, const std::string& v) { c.output_path = v; }},
         }},
    };
    return s;
}

std::string format_number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

std::vector<double> parse_snr_list(const std::string& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        const double v = to_double(item);
        if (std::isnan(v) || v == -std::numeric_limits<double>::infinity())
            bad_value(item, "an SNR in dB");
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("the SNR list is empty");
    return out;
}

CampaignConfig parse_campaign_config(std::istream& is)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(e.what());
    }

    CampaignConfig cfg;
    const auto& sections = schema();
    for (const auto& [section, body] : tree) {
        const auto known = sections.find(section);
        if (known == sections.end() || !body.data().empty())
            throw ConfigError("unknown section or top-level key '" + section + "'");
        for (const auto& [key, node] : body) {
            const auto setter = known->second.find(key);
            if (setter == known->second.end())
                throw ConfigError("unknown key '" + key + "' in [" + section + "]");
            try {
                setter->second(cfg, trim(node.data()));
            } catch (const ConfigError& e) {
                throw ConfigError("[" + section + "] " + key + ": " + e.what());
            }
        }
    }
    cfg.validate();
    return cfg;
}

CampaignConfig load_campaign_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open config '" + path + "'");
    return parse_campaign_config(is);
}

void write_campaign_config(std::ostream& os, const CampaignConfig& cfg)
{
    const auto& s = cfg.system;
    const auto& ch = cfg.channel;
    const auto& e = cfg.estimator;
    os << "[system]\n"
       << "mode = " << to_string(cfg.mode) << '\n'
       << "n_c = " << s.n_c << "\nn_s = " << s.n_s << "\nn_r = " << s.n_r << "\nn_t = " << s.n_t << '\n'
       << "d_t = " << s.d_t << "\nd_r = " << s.d_r << "\nn_a_t = " << s.n_a_t << "\nn_a_r = " << s.n_a_r << "\n\n"
       << "[channel]\n"
       << "l = " << ch.l << '\n'
       << "rician_noncentrality = " << format_number(ch.rician_noncentrality) << '\n'
       << "rician_scale = " << format_number(ch.rician_scale) << '\n'
       << "los_boost_db = " << format_number(ch.los_boost_db) << '\n'
       << "min_separation = " << format_number(ch.min_separation) << "\n\n"
       << "[pilot]\n";
    if (cfg.pilot_seed)
        os << "seed = " << *cfg.pilot_seed << '\n';
    else
        os << "; seed = 0\n";
    os << "\n[noise]\nsnr_db = ";
    for (std::size_t i = 0; i < cfg.snr_db_list.size(); ++i)
        os << (i ? ", " : "") << format_number(cfg.snr_db_list[i]);
    os << "\n\n[estimator]\n"
       << "cp_max_iters = " << e.cp.max_iters << '\n'
       << "cp_rel_tol = " << format_number(e.cp.rel_tol) << '\n'
       << "cp_restarts = " << e.cp.restarts << '\n'
       << "acd_max_sweeps = " << e.acd.max_sweeps << '\n'
       << "acd_rel_tol = " << format_number(e.acd.rel_tol) << '\n'
       << "acd_starts = " << e.acd.starts << '\n'
       << "acd_grid_oversample = " << e.acd.grid_oversample << '\n'
       << "refine = " << (e.refine ? "true" : "false") << '\n'
       << "parallel_paths = " << (e.parallel_paths ? "true" : "false") << "\n\n"
       << "[mc]\n"
       << "runs = " << cfg.mc_runs << "\nseed = " << cfg.base_seed << "\nworkers = " << cfg.workers << "\n\n"
       << "[output]\ncsv = " << cfg.output_path << '\n';
}

} // namespace tvpce
