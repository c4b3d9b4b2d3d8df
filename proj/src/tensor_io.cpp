#include "tvpce/tensor_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "tvpce/errors.hpp"

namespace tvpce {

namespace {

constexpr std::array<char, 4> magic = {'C', 'P', 'T', '1'};

template <class T>
void put_le(std::ostream& os, T value)
{
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    os.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& is)
{
    std::array<char, sizeof(T)> bytes;
    if (!is.read(bytes.data(), bytes.size()))
        throw IoError("CPT1: truncated stream");
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

} // namespace

void write_cpt(std::ostream& os, const ComplexTensor& t)
{
    if (t.order() > std::numeric_limits<std::uint8_t>::max())
        throw std::invalid_argument("CPT1: order too large");
    os.write(magic.data(), magic.size());
    put_le<std::uint8_t>(os, static_cast<std::uint8_t>(t.order()));
    for (auto d : t.dims())
        put_le<std::uint64_t>(os, d);
    for (const auto& z : t.data()) {
        put_le<double>(os, z.real());
        put_le<double>(os, z.imag());
    }
    if (!os)
        throw IoError("CPT1: write failed");
}

ComplexTensor read_cpt(std::istream& is)
{
    std::array<char, 4> head{};
    if (!is.read(head.data(), head.size()) || head != magic)
        throw IoError("CPT1: bad magic");
    const auto order = get_le<std::uint8_t>(is);
    if (order == 0)
        throw IoError("CPT1: zero order");
    std::vector<std::size_t> dims(order);
    std::uint64_t total = 1;
    for (auto& d : dims) {
        const auto e = get_le<std::uint64_t>(is);
        if (e == 0 || total > (std::uint64_t{1} << 40) / e)
            throw IoError("CPT1: invalid extent");
        total *= e;
        d = static_cast<std::size_t>(e);
    }
    std::vector<cplx> data(static_cast<std::size_t>(total));
    for (auto& z : data) {
        const double re = get_le<double>(is);
        const double im = get_le<double>(is);
        z = {re, im};
    }
    return ComplexTensor(std::move(dims), std::move(data));
}

void save_cpt(const std::filesystem::path& path, const ComplexTensor& t)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw IoError("cannot open " + path.string() + " for writing");
    write_cpt(os, t);
}

ComplexTensor load_cpt(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw IoError("cannot open " + path.string());
    return read_cpt(is);
}

} // namespace tvpce
