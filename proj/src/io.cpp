// Copyright (c) the expnls authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0
#include "expnls/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "expnls/errors.hpp"

namespace expnls {

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Completed: return "Completed";
        case Outcome::BlowupDetected: return "BlowupDetected";
        case Outcome::StepFailure: return "StepFailure";
    }
    return "Unknown";
}

}  // namespace

Json field_to_json(const RadialField& f) {
    Json j;
    j["r_max"] = f.grid->r_max;
    j["n"] = f.grid->n;
    j["values"] = f.values;
    return j;
}

RadialField field_from_json(const Json& j) {
    auto grid = make_grid(j.at("r_max").get<double>(), j.at("n").get<int>());
    RadialField f{grid, j.at("values").get<std::vector<double>>()};
    if (static_cast<int>(f.values.size()) != grid->n)
        throw dimension_error("field_from_json: values length mismatch");
    return f;
}

std::string field_to_csv(const RadialField& f) {
    std::ostringstream os;
    os << "r,value_re,value_im\n";
    for (int j = 0; j < f.grid->n; ++j)
        os << fmt17(f.grid->r[j]) << ',' << fmt17(f.values[j]) << ",0\n";
    return os.str();
}

std::string field_to_csv(const ComplexField& f) {
    std::ostringstream os;
    os << "r,value_re,value_im\n";
    for (int j = 0; j < f.grid->n; ++j)
        os << fmt17(f.grid->r[j]) << ',' << fmt17(f.values[j].real()) << ','
           << fmt17(f.values[j].imag()) << '\n';
    return os.str();
}

Json profile_to_json(const ProfileSolution& sol) {
    Json j;
    j["omega"] = sol.params.omega;
    j["mu"] = sol.params.mu;
    j["amplitude"] = sol.amplitude;
    j["grad_norm_sq"] = sol.grad_norm_sq;
    j["mass"] = sol.mass;
    j["action"] = sol.action;
    j["pohozaev"] = {sol.pohozaev_42_residual, sol.pohozaev_45_residual};
    j["decay_rate"] = sol.decay_rate_fit;
    j["grid"] = {{"r_max", sol.field.grid->r_max}, {"n", sol.field.grid->n}};
    j["values"] = sol.field.values;
    return j;
}

ProfileSolution profile_from_json(const Json& j) {
    ProfileSolution sol;
    sol.params.omega = j.at("omega").get<double>();
    sol.params.mu = j.at("mu").get<int>();
    auto grid = make_grid(j.at("grid").at("r_max").get<double>(), j.at("grid").at("n").get<int>());
    sol.field = RadialField{grid, j.at("values").get<std::vector<double>>()};
    if (static_cast<int>(sol.field.values.size()) != grid->n)
        throw dimension_error("profile_from_json: values length mismatch");
    sol.amplitude = j.at("amplitude").get<double>();
    sol.grad_norm_sq = j.at("grad_norm_sq").get<double>();
    sol.mass = j.at("mass").get<double>();
    sol.action = j.at("action").get<double>();
    sol.pohozaev_42_residual = j.at("pohozaev")[0].get<double>();
    sol.pohozaev_45_residual = j.at("pohozaev")[1].get<double>();
    sol.decay_rate_fit = j.at("decay_rate").get<double>();
    const FunctionalReport rep =
        functionals(std::span<const double>(sol.field.values), *grid, sol.params);
    sol.energy = rep.energy;
    sol.equation_residual = residual_eq20(sol.field.values, sol.params, *grid);
    return sol;
}

Json spectral_report_to_json(const SpectralReport& rep) {
    Json j;
    j["omega"] = rep.omega;
    j["mu"] = rep.mu;
    j["morse_plus"] = rep.morse_plus;
    j["morse_minus"] = rep.morse_minus;
    j["lminus_ground_eig"] = rep.lminus_ground_eig;
    j["lplus_kernel_eig_l1"] = rep.lplus_kernel_eig_l1;
    j["lplus_lowest_eig_l0"] = rep.lplus_lowest_eig_l0;
    j["vk_slope"] = rep.vk_slope;
    j["psi_form"] = rep.psi_form;
    j["psi_orth_residual"] = rep.psi_orth_residual;
    return j;
}

Json growing_mode_to_json(const ModelParams& p, const GrowingMode& mode,
                          std::optional<double> lambda_dynamics_fit) {
    Json j;
    j["omega"] = p.omega;
    j["mu"] = p.mu;
    j["lambda"] = mode.lambda;
    j["residual"] = mode.residual;
    if (lambda_dynamics_fit) {
        j["lambda_dynamics_fit"] = *lambda_dynamics_fit;
        j["agreement_pct"] = 100.0 * std::abs(*lambda_dynamics_fit - mode.lambda) / mode.lambda;
    } else {
        j["lambda_dynamics_fit"] = nullptr;
        j["agreement_pct"] = nullptr;
    }
    return j;
}

std::string trajectory_to_csv(const TrajectoryReport& rep) {
    std::ostringstream os;
    os << "t,mass,energy,grad_norm_sq,virial_moment,virial_i\n";
    for (const auto& st : rep.states)
        os << fmt17(st.t) << ',' << fmt17(st.mass) << ',' << fmt17(st.energy) << ','
           << fmt17(st.grad_norm_sq) << ',' << fmt17(st.virial_moment) << ','
           << fmt17(st.virial_i) << '\n';
    return os.str();
}

Json blowup_table_to_json(const ModelParams& p, std::span<const BlowupRow> rows) {
    Json table = Json::array();
    for (const auto& row : rows) {
        Json j;
        j["lambda"] = row.lambda;
        j["energy"] = row.energy;
        j["virial_i"] = row.virial_i;
        j["action"] = row.action;
        j["grad_norm_sq"] = row.grad_norm_sq;
        j["variance"] = row.variance;
        j["conditions"] = {{"energy_positive", row.energy_positive},
                           {"virial_negative", row.virial_negative},
                           {"action_below", row.action_below},
                           {"gradient_below_one", row.gradient_below_one},
                           {"kminus_member", row.kminus_member},
                           {"all", row.conditions_ok}};
        j["outcome"] = outcome_name(row.outcome);
        if (row.blowup_time_estimate)
            j["blowup_time_estimate"] = *row.blowup_time_estimate;
        else
            j["blowup_time_estimate"] = nullptr;
        table.push_back(std::move(j));
    }
    Json out;
    out["omega"] = p.omega;
    out["mu"] = p.mu;
    out["rows"] = std::move(table);
    return out;
}

std::string potential_to_csv(const SectorOperator& op) {
    std::ostringstream os;
    os << "r,V\n";
    const RadialGrid& g = op.grid();
    for (int j = 0; j < g.n; ++j)
        os << fmt17(g.r[j]) << ',' << fmt17(op.potential_values()[j]) << '\n';
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw numeric_error("write_file: cannot open " + path);
    os << contents;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw numeric_error("read_file: cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace expnls
