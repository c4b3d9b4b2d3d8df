#pragma once

#include <filesystem>
#include <iosfwd>

#include "tvpce/sim_channel.hpp"

namespace tvpce {

// One path per line: "re_b im_b omega1 omega2 psi varsigma", space separated.
// Blank lines and lines starting with '#' are skipped on input.
void write_params(std::ostream& os, const ChannelParamSet& params);
ChannelParamSet read_params(std::istream& is);

void save_params(const std::filesystem::path& path, const ChannelParamSet& params);
ChannelParamSet load_params(const std::filesystem::path& path);

} // namespace tvpce
