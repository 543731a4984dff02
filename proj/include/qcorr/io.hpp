#pragma once

#include <json.hpp>

#include "qcorr/correlations.hpp"
#include "qcorr/smooth.hpp"
#include "qcorr/uncertainty_game.hpp"

namespace qcorr {

using Json = nlohmann::ordered_json;

// Shared matrix encoding: row-major [[[re, im], ...], ...].
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

// State files: { "dims": [...], "matrix": [...], "normalized": true }.
Json state_to_json(const DensityOperator& rho);
DensityOperator state_from_json(const Json& j);
void save_state(const DensityOperator& rho, const std::string& path);
DensityOperator load_state(const std::string& path);

// Measurement files: { "elements": [matrix, ...] }.
Json povm_to_json(const Povm& povm);
Povm povm_from_json(const Json& j);

Json measure_report_to_json(const MeasureReport& rep);
Json certificate_to_json(const CollapseCertificate& cert);
Json eur_check_to_json(const EurCheck& check);
Json game_record_to_json(const GameRecord& rec);
Json smooth_result_to_json(const SmoothResult& res);

}  // namespace qcorr
