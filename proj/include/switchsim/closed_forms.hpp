#pragma once

#include <iosfwd>

#include "switchsim/protocol.hpp"

namespace switchsim {

// Closed-form heralded success probabilities for the three shipped channel
// families, plus brute-force verification of the full conditional-output
// tables and region scans of the advantage of the doubled construction.

struct PauliParams {
    double p0, p1, p2;
    PauliParams(double p0, double p1, double p2);  // each in (0,1), sum 1 within 1e-12
};

struct FlipParams {
    double r, s;
    FlipParams(double r, double s);  // each in (0,1)
};

// single switch of two pauli_channel(p) copies, controls measured in +/-
double pauli_switch_success(const PauliParams& p);  // 2 p1 p2
// switch of two such switches at control |++>
double pauli_double_switch_success(const PauliParams& p);  // 4 p1 p2 (3 p0^2 + p1^2 + p2^2)
// doubled minus single success on the (p1, p2) simplex
double pauli_advantage(double p1, double p2);

// switch of bit_flip(r) with phase_flip(s)
double flip_switch_success(const FlipParams& fp);  // r s
double flip_double_switch_success(const FlipParams& fp);  // 4 r s (1-r)(1-s)

// switch of two bit flips / two phase flips is heraldless on its own; the
// switch of those two switches succeeds with the same 4 r s (1-r)(1-s)
double twin_flip_double_switch_success(const FlipParams& fp);

struct TableReport {
    double max_prob_err = 0.0;     // branch probabilities vs closed form
    double max_state_err = 0.0;    // normalized conditional target states
    double max_control_err = 0.0;  // joint-output reconstruction residual
    double worst() const;
    bool ok() const { return worst() < 1e-9; }
};

// Rebuild every branch of the doubled switch output (probability, conditional
// target map, control projector) from closed forms and compare against the
// brute-force channel on a spanning probe set.
TableReport verify_pauli_table(const PauliParams& p);
TableReport verify_bit_phase_table(const FlipParams& fp);
TableReport verify_twin_flip_table(const FlipParams& fp);

struct RegionSample {
    double param1 = 0.0;
    double param2 = 0.0;
    double baseline_prob = 0.0;
    double higher_prob = 0.0;
    double advantage = 0.0;
    bool advantage_flag = false;
};

enum class ScanExample { pauli, bit_phase, twin_flip };

struct ScanResult {
    std::vector<RegionSample> samples;
    double max_crosscheck_err = 0.0;
    int crosschecked = 0;
};

// Closed-form samples on an interior grid ((i + 1/2)/n per axis; the pauli
// family keeps p1 + p2 < 1). Every stride-th sample is cross-checked against
// the brute-force protocol.
ScanResult scan_region(ScanExample ex, int grid_n, int crosscheck_stride = 10);

// header param1,param2,baseline_prob,higher_prob,advantage,flag; floats %.12g
void write_csv(std::ostream& out, const std::vector<RegionSample>& rows);
std::vector<RegionSample> read_csv(std::istream& in);

}  // namespace switchsim
