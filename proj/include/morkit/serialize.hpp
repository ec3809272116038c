#pragma once

#include <filesystem>

#include <json.hpp>

#include "morkit/h2norm.hpp"
#include "morkit/irka_fo.hpp"
#include "morkit/irka_so.hpp"

namespace morkit {

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

// {"iterations", "converged", "shift_changes", "shift_history": [[{re, im}]],
//  "final_shifts": {...}, "warnings"}
nlohmann::json to_json(const IrkaReport& report);
IrkaReport irka_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ShiftSet& shifts);
ShiftSet shift_set_from_json(const nlohmann::json& j);

// {"h2_full", "h2_rom", "h2_error_P", "h2_error_Q", "residuals": {...}}
nlohmann::json to_json(const NormReport& report);
NormReport norm_report_from_json(const nlohmann::json& j);

// pos_{M,D,K,H,L}.mtx, vel_{M,D,K,H,L}.mtx and report.json.
void write_spmor_result(const std::filesystem::path& dir, const SpmorResult& result);
SpmorResult read_spmor_result(const std::filesystem::path& dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace morkit
