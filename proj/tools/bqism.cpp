// bqism: verification suites, spectra and parameter sweeps for the D(D3)
// boundary-integrable anyon chain.
//
// Exit codes: 0 = pass, 1 = identity check failed, 2 = usage/validation error.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bqism/report.hpp"

namespace {

using bqism::cd;
using nlohmann::json;

int n_max_from_env() {
    if (const char* s = std::getenv("BQISM_NMAX")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    return bqism::kDefaultNMax;
}

void write_output(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        if (!f) throw std::runtime_error("cannot open output file: " + out_path);
        f << j.dump(2) << "\n";
    }
}

std::string csv_complex(cd z) {
    return std::to_string(z.real()) + ";" + std::to_string(z.imag());
}

int run_verify(const std::string& target, int samples, std::uint64_t seed, double tol,
               const std::string& params_str, const std::string& out_path) {
    json params;
    if (!params_str.empty()) params = json::parse(params_str);
    bqism::ResidualReport rep;
    const double def = tol;  // <=0 means "use the suite default"
    if (target == "ybe")
        rep = bqism::verify_ybe(samples, seed, def > 0 ? def : 1e-10);
    else if (target == "unitarity")
        rep = bqism::verify_unitarity(samples, seed, def > 0 ? def : 1e-10);
    else if (target == "dual")
        rep = bqism::verify_dual(samples, seed, def > 0 ? def : 1e-9);
    else if (target == "crossing")
        rep = bqism::verify_crossing(seed, def > 0 ? def : 1e-2);
    else if (target == "re-minus")
        rep = bqism::verify_re_minus(samples, seed, def > 0 ? def : 1e-10, params);
    else if (target == "re-plus")
        rep = bqism::verify_re_plus(samples, seed, def > 0 ? def : 1e-10, params);
    else if (target == "special")
        rep = bqism::verify_special(samples, seed, def > 0 ? def : 1e-12);
    else if (target == "transfer-commute")
        rep = bqism::verify_transfer_commute(samples, seed, def > 0 ? def : 1e-9);
    else if (target == "ham-commute")
        rep = bqism::verify_ham_commute(samples, seed, def > 0 ? def : 1e-8);
    else
        throw CLI::ValidationError("unknown verify target: " + target);
    write_output(rep.to_json(), out_path);
    if (target == "crossing") {
        std::cerr << "crossing: min sampled residual " << rep.min_residual()
                  << " (reportive, not a proof of non-existence)\n";
        return rep.pass ? 0 : 1;
    }
    std::cerr << rep.identity_name << ": max residual " << rep.max_residual()
              << (rep.pass ? " PASS" : " FAIL") << "\n";
    return rep.pass ? 0 : 1;
}

json spectrum_json(const bqism::ChainSpec& spec, const bqism::SpectrumResult& res) {
    json ev = json::array();
    for (cd e : res.eigenvalues) ev.push_back({e.real(), e.imag()});
    return {{"spec", bqism::chain_spec_to_json(spec)},
            {"eigenvalues", std::move(ev)},
            {"hermiticity_defect", res.hermiticity_defect}};
}

int run_spectrum(const std::string& spec_file, const std::string& out_path,
                 const std::string& format) {
    std::ifstream f(spec_file);
    if (!f) throw CLI::ValidationError("cannot open spec file: " + spec_file);
    const bqism::ChainSpec spec = bqism::chain_spec_from_json(json::parse(f));
    spec.validate(n_max_from_env());
    const auto res = bqism::spectrum(spec, n_max_from_env());
    if (format == "csv") {
        std::string csv = "index,re,im\n";
        for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
            csv += std::to_string(i) + "," + std::to_string(res.eigenvalues[i].real()) +
                   "," + std::to_string(res.eigenvalues[i].imag()) + "\n";
        if (out_path.empty()) std::cout << csv;
        else std::ofstream(out_path) << csv;
    } else {
        write_output(spectrum_json(spec, res), out_path);
    }
    return 0;
}

int run_sweep(const std::string& spec_file, const std::string& axis, double from, double to,
              int steps, const std::string& out_path) {
    if (steps < 1) throw CLI::ValidationError("sweep: steps must be >= 1");
    std::ifstream f(spec_file);
    if (!f) throw CLI::ValidationError("cannot open spec file: " + spec_file);
    json base = json::parse(f);
    std::string csv = "value,hermiticity_defect,flag,eigenvalues_re_im\n";
    for (int s = 0; s < steps; ++s) {
        const double v = steps == 1 ? from : from + (to - from) * s / (steps - 1);
        json j = base;
        if (axis == "X" || axis == "Y") j[axis] = v;
        else if (axis == "a") j["left"]["a"] = {v, 0.0};
        else if (axis == "b") j["right"]["b"] = {v, 0.0};
        else throw CLI::ValidationError("sweep axis must be one of X, Y, a, b");
        std::string row = std::to_string(v);
        try {
            const bqism::ChainSpec spec = bqism::chain_spec_from_json(j);
            spec.validate(n_max_from_env());
            const auto res = bqism::spectrum(spec, n_max_from_env());
            row += "," + std::to_string(res.hermiticity_defect) + ",ok";
            for (cd e : res.eigenvalues) row += "," + csv_complex(e);
        } catch (const std::exception& e) {
            row += std::string(",nan,singular:") + e.what();
        }
        csv += row + "\n";
    }
    if (out_path.empty()) std::cout << csv;
    else std::ofstream(out_path) << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary quantum inverse scattering toolkit for the D(D3) anyon chain"};
    app.require_subcommand(1);

    std::string target, params_str, out_path, format = "json", spec_file, axis = "X";
    int samples = 100, steps = 0;
    std::uint64_t seed = 1;
    double tol = -1.0, from = 0.0, to = 1.0;

    auto* verify = app.add_subcommand("verify", "run a residual verification suite");
    verify->add_option("target", target,
                       "ybe|unitarity|dual|crossing|re-minus|re-plus|special|"
                       "transfer-commute|ham-commute")
        ->required();
    verify->add_option("--samples", samples, "number of seeded samples");
    verify->add_option("--seed", seed, "PRNG seed (mt19937_64)");
    verify->add_option("--tol", tol, "override the suite tolerance");
    verify->add_option("--params", params_str, "boundary parameter JSON");
    verify->add_option("--out", out_path, "write the JSON report here");

    auto* spectrum = app.add_subcommand("spectrum", "diagonalize a chain spec");
    spectrum->add_option("spec", spec_file, "ChainSpec JSON file")->required();
    spectrum->add_option("--out", out_path, "output path");
    spectrum->add_option("--format", format, "json|csv");

    auto* sweep = app.add_subcommand("sweep", "spectra along one parameter axis");
    sweep->add_option("spec", spec_file, "ChainSpec JSON file")->required();
    sweep->add_option("--axis", axis, "X|Y|a|b");
    sweep->add_option("--from", from, "start value")->required();
    sweep->add_option("--to", to, "end value")->required();
    sweep->add_option("--steps", steps, "number of steps")->required();
    sweep->add_option("--out", out_path, "output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_verify(target, samples, seed, tol, params_str, out_path);
        if (spectrum->parsed()) return run_spectrum(spec_file, out_path, format);
        if (sweep->parsed()) return run_sweep(spec_file, axis, from, to, steps, out_path);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
