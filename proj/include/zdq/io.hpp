#pragma once

#include <string>

#include "zdq/codec.hpp"
#include "zdq/coupling.hpp"
#include "zdq/solver.hpp"

namespace zdq {

// All floating output is printed with 12 significant digits; trace belief
// columns use 12 fixed decimals. CSV bodies are byte-stable across reruns.
std::string fmt_g12(double v);
std::string fmt_f12(double v);

void write_text_file(const std::string& path, const std::string& body);
std::string read_text_file(const std::string& path);

// Versioned policy file consumed by the codec commands; symbols and states
// are stored 1-based.
void save_triplet(const CanonicalTriplet& t, const std::string& path);
CanonicalTriplet load_triplet(const std::string& path);

void save_coupling(const CouplingReport& r, const std::string& path);
CouplingReport load_coupling(const std::string& path);

std::string tau_matrix_csv(const Matrix& tau);
std::string trace_csv(const SessionTrace& trace, const std::string& params_comment);

}  // namespace zdq
