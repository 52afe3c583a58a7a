#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qca/evolution.hpp"

namespace qca {

// Doubles serialized with 17 significant digits (%.17g): enough to
// round-trip IEEE binary64, and byte-stable across reruns.
std::string g17(double x);

// State snapshot file (bit-exact round trip), little-endian:
//   magic "QCASTATE" | u32 version=1 | u32 N | u32 Lambda | u8 mode
//   | u64 dim | dim * (f64 re, f64 im) in flat-index order
// mode: 0 = HardCutoff, 1 = CyclicWrap.
void save_state(const std::string& path, const StateVector& state);
StateVector load_state(const std::string& path,
                       std::int64_t budget = LatticeSpec::kDefaultBudget);

// Observable time series as CSV: columns (step, time = 2*step*delta_t,
// observable, index, value); aggregate observables carry index -1. The
// initial state (step 0) is not emitted unless include_initial is set, so a
// run of S steps yields S rows per observable at record_every = 1.
struct CsvOptions {
    int record_every = 1;                 // keep steps s with s % record_every == 0
    bool include_initial = false;         // also emit the step-0 row
    std::vector<std::string> observables; // empty = all of n, L, L2, aggregates
};
void write_observables_csv(std::ostream& out, const EvolutionReport& report,
                           const LatticeSpec& spec, const CsvOptions& options = {});

// Minimal deterministic JSON emitter (insertion-ordered keys, g17 numbers).
class JsonWriter {
  public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(std::int64_t v);
    JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
    JsonWriter& value(bool v);
    JsonWriter& value(const std::string& v);
    JsonWriter& value(const char* v) { return value(std::string(v)); }
    JsonWriter& raw(const std::string& text);  // pre-serialized JSON
    const std::string& str() const { return out_; }

  private:
    void comma();
    std::string out_;
    std::vector<bool> first_;
    bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

} // namespace qca
