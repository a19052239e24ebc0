// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

#include "expnls/dynamics.hpp"
#include "expnls/spectral.hpp"
#include "expnls/stability.hpp"

namespace expnls {

using Json = nlohmann::json;

Json field_to_json(const RadialField& f);
RadialField field_from_json(const Json& j);

std::string field_to_csv(const RadialField& f);
std::string field_to_csv(const ComplexField& f);

Json profile_to_json(const ProfileSolution& sol);
ProfileSolution profile_from_json(const Json& j);

Json spectral_report_to_json(const SpectralReport& rep);

Json growing_mode_to_json(const ModelParams& p, const GrowingMode& mode,
                          std::optional<double> lambda_dynamics_fit);

std::string trajectory_to_csv(const TrajectoryReport& rep);
Json blowup_table_to_json(const ModelParams& p, std::span<const BlowupRow> rows);

std::string potential_to_csv(const SectorOperator& op);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace expnls
