// nufft: nonuniform FFT command-line driver.
//
//   nufft transform --type {1|2|3|2d2|inv1|inv2} --in FILE... --out FILE
//   nufft verify    --n N... --gamma G... --eps E... --trials T --seed S --out FILE
//   nufft bench     --n N... --eps E... --gamma G --trials T --out FILE
//   nufft cgstudy   --n N... --gamma G... --tol T --trials T --seed S --out FILE
//
// CSV conventions and exit codes are described in the README.

#include <CLI11.hpp>

#include <cstdio>
#include <stdexcept>

#include "nufft_app.hpp"

int main(int argc, char** argv) {
    CLI::App cli("nonuniform FFT transforms, verification sweeps, and benchmarks");
    cli.require_subcommand(1);

    nufft::app::TransformOptions topt;
    std::uint64_t transform_seed = 1;  // accepted for interface uniformity
    auto* transform = cli.add_subcommand("transform", "run one transform on CSV inputs");
    transform->add_option("--type", topt.type, "1, 2, 3, 2d2, inv1 or inv2")->required();
    transform->add_option("--in", topt.inputs, "input CSV files (order depends on --type)")
        ->required()
        ->expected(-1);
    transform->add_option("--out", topt.out, "output CSV file")->required();
    transform->add_option("--eps", topt.eps, "working precision");
    transform->add_option("--tol", topt.tol, "CG tolerance for inverse types");
    transform->add_option("--threads", topt.threads, "worker threads for the type-2 online stage");
    transform->add_option("--seed", transform_seed, "unused; accepted for uniformity");
    transform->add_flag("--fft", topt.plain_fft, "plain FFT baseline instead of the NUFFT path");

    nufft::app::VerifyOptions vopt;
    auto* verify = cli.add_subcommand("verify", "worst-grid accuracy sweep against the naive sum");
    verify->add_option("--n", vopt.n_list, "transform sizes")->expected(-1);
    verify->add_option("--gamma", vopt.gamma_list, "perturbation parameters")->expected(-1);
    verify->add_option("--eps", vopt.eps_list, "working precisions")->expected(-1);
    verify->add_option("--trials", vopt.trials, "random coefficient draws per cell");
    verify->add_option("--seed", vopt.seed, "RNG seed");
    verify->add_option("--out", vopt.out, "output CSV file")->required();
    verify->add_flag("--decay", vopt.decay, "use 1/k^2-decaying coefficients");

    nufft::app::BenchOptions bopt;
    auto* bench = cli.add_subcommand("bench", "timing table: plan, online stage, FFT baseline");
    bench->add_option("--n", bopt.n_list, "transform sizes")->expected(-1);
    bench->add_option("--eps", bopt.eps_list, "working precisions")->expected(-1);
    bench->add_option("--gamma", bopt.gamma, "worst-grid perturbation");
    bench->add_option("--trials", bopt.reps, "timing repetitions (median)");
    bench->add_option("--seed", bopt.seed, "RNG seed");
    bench->add_option("--out", bopt.out, "output CSV file")->required();

    nufft::app::CgStudyOptions copt;
    auto* cgstudy = cli.add_subcommand("cgstudy", "CG iteration counts for the inverse transform");
    cgstudy->add_option("--n", copt.n_list, "transform sizes")->expected(-1);
    cgstudy->add_option("--gamma", copt.gamma_list, "perturbation parameters, < 1/2")->expected(-1);
    cgstudy->add_option("--tol", copt.tol, "CG relative tolerance");
    cgstudy->add_option("--eps", copt.eps, "plan working precision");
    cgstudy->add_option("--trials", copt.trials, "random grids per cell");
    cgstudy->add_option("--seed", copt.seed, "RNG seed");
    cgstudy->add_option("--out", copt.out, "output CSV file")->required();

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        cli.exit(e);
        return e.get_exit_code() == 0 ? 0 : nufft::app::kExitIo;
    }

    try {
        if (*transform) return nufft::app::run_transform(topt);
        if (*verify) return nufft::app::run_verify(vopt);
        if (*bench) return nufft::app::run_bench(bopt);
        if (*cgstudy) return nufft::app::run_cgstudy(copt);
    } catch (const nufft::CsvError& e) {
        std::fprintf(stderr, "nufft: %s\n", e.what());
        return nufft::app::kExitIo;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "nufft: %s\n", e.what());
        return nufft::app::kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "nufft: %s\n", e.what());
        return nufft::app::kExitDomain;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "nufft: %s\n", e.what());
        return nufft::app::kExitIo;
    }
    return nufft::app::kExitIo;
}
