#include "tvpce/param_io.hpp"

#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "tvpce/errors.hpp"

namespace tvpce {

void write_params(std::ostream& os, const ChannelParamSet& params)
{
    const auto old_flags = os.flags();
    const auto old_prec = os.precision();
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& p : params.paths)
        os << p.b.real() << ' ' << p.b.imag() << ' ' << p.omega1 << ' ' << p.omega2 << ' ' << p.psi << ' '
           << p.varsigma << '\n';
    os.flags(old_flags);
    os.precision(old_prec);
    if (!os)
        throw IoError("parameter file: write failed");
}

ChannelParamSet read_params(std::istream& is)
{
    ChannelParamSet out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream ss(line);
        double re = 0, im = 0;
        PathParams p;
        if (!(ss >> re >> im >> p.omega1 >> p.omega2 >> p.psi >> p.varsigma))
            throw IoError("parameter file: malformed line " + std::to_string(lineno));
        std::string rest;
        if (ss >> rest)
            throw IoError("parameter file: trailing fields on line " + std::to_string(lineno));
        p.b = {re, im};
        out.paths.push_back(p);
    }
    return out;
}

void save_params(const std::filesystem::path& path, const ChannelParamSet& params)
{
    std::ofstream os(path);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    write_params(os, params);
}

ChannelParamSet load_params(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw IoError("cannot open " + path.string());
    return read_params(is);
}

} // namespace tvpce
