#include "qclock/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qclock::io {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(std::span<const double> times, std::span<const BlochVector> states) {
    if (times.size() != states.size())
        throw std::invalid_argument("trajectory_csv: times/states size mismatch");
    std::string out = "t,u,v,w,pe\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        out += format_full(times[i]);
        out += ',';
        out += format_full(states[i].u);
        out += ',';
        out += format_full(states[i].v);
        out += ',';
        out += format_full(states[i].w);
        out += ',';
        out += format_full(0.5 * (1.0 + states[i].w));
        out += '\n';
    }
    return out;
}

void write_trajectory_csv(const std::filesystem::path& path, std::span<const double> times,
                          std::span<const BlochVector> states) {
    atomic_write(path, trajectory_csv(times, states));
}

}  // namespace qclock::io
