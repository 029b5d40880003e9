#include "jinxin/trajectory_io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <istream>
#include <ostream>

#include "jinxin/errors.hpp"

namespace jinxin {

namespace {

constexpr char kMagic[4] = {'J', 'X', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <class U>
void put_le(std::ostream& os, U v) {
    unsigned char bytes[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(bytes), sizeof(U));
}

void put_f64(std::ostream& os, double x) { put_le(os, std::bit_cast<std::uint64_t>(x)); }

template <class U>
U get_le(std::istream& is) {
    unsigned char bytes[sizeof(U)];
    if (!is.read(reinterpret_cast<char*>(bytes), sizeof(U))) throw ContractError("truncated JXT1 stream");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(bytes[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_le<std::uint64_t>(is)); }

std::size_t components(const Trajectory& traj) {
    return traj.representation == Representation::Scalar ? 1 : 2;
}

std::pair<const char*, const char*> component_names(Representation r) {
    switch (r) {
        case Representation::ConservativeDissipative:
            return {"w1", "w2"};
        case Representation::Kinetic:
            return {"f1", "f2"};
        case Representation::Scalar:
            break;
    }
    return {"wp", ""};
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const Grid& g = traj.grid;
    os << "t,field";
    for (std::size_t j = 0; j < g.size(); ++j) os << ',' << fmt(g.x(j));
    os << '\n';
    const auto names = component_names(traj.representation);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        for (std::size_t c = 0; c < components(traj); ++c) {
            const auto& field = c == 0 ? traj.first[i] : traj.second[i];
            os << fmt(traj.times[i]) << ',' << (c == 0 ? names.first : names.second);
            for (double v : field) os << ',' << fmt(v);
            os << '\n';
        }
    }
}

void write_trajectory_binary(std::ostream& os, const Trajectory& traj) {
    os.write(kMagic, 4);
    put_le<std::uint32_t>(os, kVersion);
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(traj.representation));
    put_le<std::uint64_t>(os, traj.grid.size());
    put_le<std::uint64_t>(os, components(traj));
    put_le<std::uint64_t>(os, traj.size());
    put_f64(os, traj.grid.length());
    put_f64(os, traj.params.epsilon);
    put_f64(os, traj.params.lambda);
    put_f64(os, traj.params.a);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        put_f64(os, traj.times[i]);
        for (double v : traj.first[i]) put_f64(os, v);
        if (components(traj) == 2)
            for (double v : traj.second[i]) put_f64(os, v);
    }
}

Trajectory read_trajectory_binary(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw ContractError("not a JXT1 stream");
    if (get_le<std::uint32_t>(is) != kVersion) throw ContractError("unsupported JXT1 version");
    const auto rep = get_le<std::uint32_t>(is);
    if (rep > 2) throw ContractError("unknown representation in JXT1 stream");
    const auto n = get_le<std::uint64_t>(is);
    const auto comps = get_le<std::uint64_t>(is);
    const auto frames = get_le<std::uint64_t>(is);
    const double length = get_f64(is);

    Trajectory traj;
    traj.representation = static_cast<Representation>(rep);
    if (comps != components(traj)) throw ContractError("component count does not match the representation");
    traj.grid = Grid(n, length);
    traj.params.epsilon = get_f64(is);
    traj.params.lambda = get_f64(is);
    traj.params.a = get_f64(is);
    traj.params.h = Nonlinearity::none();
    for (std::uint64_t i = 0; i < frames; ++i) {
        traj.times.push_back(get_f64(is));
        std::vector<double> a(n), b(comps == 2 ? n : 0);
        for (double& v : a) v = get_f64(is);
        for (double& v : b) v = get_f64(is);
        traj.first.push_back(std::move(a));
        traj.second.push_back(std::move(b));
    }
    return traj;
}

void write_atomically(const std::string& path, const std::function<void(std::ostream&)>& body, bool binary) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        body(out);
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw Error("write to '" + tmp.string() + "' failed");
        }
    }
    fs::rename(tmp, target);
}

}  // namespace jinxin
