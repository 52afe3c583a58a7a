#include "qca/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "qca/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");
static_assert(sizeof(double) == 8);

namespace qca {

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

constexpr char kMagic[8] = {'Q', 'C', 'A', 'S', 'T', 'A', 'T', 'E'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

} // namespace

void save_state(const std::string& path, const StateVector& state) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open snapshot file for writing: " + path);
    f.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(f, kVersion);
    put<std::uint32_t>(f, static_cast<std::uint32_t>(state.spec.num_sites));
    put<std::uint32_t>(f, static_cast<std::uint32_t>(state.spec.cutoff));
    put<std::uint8_t>(f, state.spec.truncation_mode == TruncationMode::CyclicWrap ? 1 : 0);
    put<std::uint64_t>(f, static_cast<std::uint64_t>(state.amp.size()));
    for (const cplx& a : state.amp) {
        put<double>(f, a.real());
        put<double>(f, a.imag());
    }
    if (!f) throw ConfigError("snapshot write failed: " + path);
}

StateVector load_state(const std::string& path, std::int64_t budget) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open snapshot file: " + path);
    char magic[8];
    f.read(magic, sizeof magic);
    if (!f || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw ConfigError("not a state snapshot: " + path);
    const auto version = get<std::uint32_t>(f);
    if (version != kVersion)
        throw ConfigError("unsupported snapshot version " + std::to_string(version));
    const auto num_sites = get<std::uint32_t>(f);
    const auto cutoff = get<std::uint32_t>(f);
    const auto mode_byte = get<std::uint8_t>(f);
    if (mode_byte > 1) throw ConfigError("corrupt snapshot: bad truncation mode");
    const auto dim = get<std::uint64_t>(f);
    if (!f) throw ConfigError("truncated snapshot header: " + path);

    LatticeSpec spec(static_cast<int>(num_sites), static_cast<int>(cutoff),
                     mode_byte == 1 ? TruncationMode::CyclicWrap
                                    : TruncationMode::HardCutoff,
                     budget);
    if (dim != static_cast<std::uint64_t>(spec.dim()))
        throw ConfigError("corrupt snapshot: dimension mismatch");

    StateVector state(spec);
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double re = get<double>(f);
        const double im = get<double>(f);
        state.amp[i] = cplx(re, im);
    }
    if (!f) throw ConfigError("truncated snapshot payload: " + path);
    return state;
}

void write_observables_csv(std::ostream& out, const EvolutionReport& report,
                           const LatticeSpec& spec, const CsvOptions& options) {
    if (options.record_every < 1)
        throw ConfigError("record_every must be a positive integer");
    static const char* kKnown[] = {"n",       "L",          "L2",  "electric_energy",
                                   "total_n", "staggered_charge", "norm"};
    for (const std::string& name : options.observables) {
        bool known = false;
        for (const char* k : kKnown) known = known || name == k;
        if (!known) throw ConfigError("unknown observable: " + name);
    }
    auto wanted = [&](const char* name) {
        if (options.observables.empty()) return true;
        for (const std::string& s : options.observables)
            if (s == name) return true;
        return false;
    };

    out << "step,time,observable,index,value\n";
    if (report.observables.empty()) return;
    const double dt = spec.epsilon;
    const std::size_t last = report.observables.size() - 1;
    for (std::size_t s = 0; s < report.observables.size(); ++s) {
        if (s == 0 && !options.include_initial) continue;
        if (s % options.record_every != 0 && s != last) continue;
        const Observables& obs = report.observables[s];
        const std::string prefix =
            std::to_string(s) + "," + g17(2.0 * static_cast<double>(s) * dt) + ",";
        if (wanted("n"))
            for (int p = 0; p < spec.num_sites; ++p)
                out << prefix << "n," << p << "," << g17(obs.n[p]) << "\n";
        if (wanted("L"))
            for (int j = 0; j < spec.num_links; ++j)
                out << prefix << "L," << j << "," << g17(obs.L[j]) << "\n";
        if (wanted("L2"))
            for (int j = 0; j < spec.num_links; ++j)
                out << prefix << "L2," << j << "," << g17(obs.L2[j]) << "\n";
        if (wanted("electric_energy"))
            out << prefix << "electric_energy,-1," << g17(obs.electric_energy) << "\n";
        if (wanted("total_n"))
            out << prefix << "total_n,-1," << g17(obs.total_n) << "\n";
        if (wanted("staggered_charge"))
            out << prefix << "staggered_charge,-1," << g17(obs.staggered_charge) << "\n";
        if (wanted("norm"))
            out << prefix << "norm,-1," << g17(obs.norm) << "\n";
    }
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonWriter::comma() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ',';
        first_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    comma();
    out_ += '{';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += '}';
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    comma();
    out_ += '[';
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += ']';
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    comma();
    out_ += '"';
    out_ += json_escape(k);
    out_ += "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    comma();
    out_ += g17(v);
    return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
    comma();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
    comma();
    out_ += '"';
    out_ += json_escape(v);
    out_ += '"';
    return *this;
}

JsonWriter& JsonWriter::raw(const std::string& text) {
    comma();
    out_ += text;
    return *this;
}

} // namespace qca
