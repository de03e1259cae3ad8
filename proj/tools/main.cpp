#include <iostream>

#include <CLI11.hpp>

#include "beamlab/errors.hpp"
#include "beamlab/parallel.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
    cli::RunConfig c;
    CLI::App app{"Numerical experiments for the discrete bi-Laplacian H = Delta^2 + V on Z"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--potential", c.potential, "potential file (lines 'n value', optional 'background b')");
    app.add_option("--window", c.window, "window radius N")->check(CLI::PositiveNumber);
    app.add_option("--tol", c.tol, "relative null-space tolerance")->check(CLI::PositiveNumber);
    app.add_option("--mu0", c.mu0, "band split point")->check(CLI::Range(0.0, 1.0));
    app.add_option("--quad-tol", c.quadTol, "per-band quadrature tolerance")->check(CLI::PositiveNumber);
    app.add_option("--out", c.out, "output directory");
    app.add_option("--seed", c.seed, "seed for randomized probes");
    app.add_option("--workers", c.workers, "worker threads (0 = hardware)");

    auto* classify = app.add_subcommand("classify", "threshold classification report");
    classify->add_option("--threshold", c.threshold, "zero or sixteen");

    auto* waveop = app.add_subcommand("waveop", "stationary wave operator kernel");
    waveop->add_option("--side", c.side, "plus or minus");

    auto* growth = app.add_subcommand("growth", "sup-norm growth of W f_N");
    growth->add_option("--Ns", c.Ns, "sizes N")->delimiter(',');
    growth->add_option("--offset", c.offset, "probe offset past N");

    auto* decay = app.add_subcommand("decay", "l1 -> l_inf decay of the beam propagator");
    decay->add_option("--a", c.a, "mass parameter");
    decay->add_option("--tmin", c.tmin)->check(CLI::PositiveNumber);
    decay->add_option("--tmax", c.tmax)->check(CLI::PositiveNumber);
    decay->add_option("--points", c.points)->check(CLI::Range(8, 100000));
    decay->add_flag("--perturbed", c.perturbed, "use H = Delta^2 + V from --potential");

    auto* probe = app.add_subcommand("probe", "threshold blow-up or cancellation probe");
    probe->add_option("--threshold", c.threshold, "zero or sixteen");
    probe->add_option("--kind", c.kind, "blowup, vQ, vS0, vS1, vS2 or sixteen-vQt");

    auto* cz = app.add_subcommand("cz", "discrete singular-integral suite");
    cz->add_option("--kernel", c.kernel, "k1+, k1-, k2+, k2-, kt1, kt2+, kt2-, schur-probe");
    cz->add_option("--Ns", c.Ns, "window radii")->delimiter(',');
    cz->add_option("--p", c.ps, "exponents, 'inf' allowed")->delimiter(',');
    cz->add_option("--probes", c.probes)->check(CLI::Range(32, 1000000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        beamlab::setWorkerCount(c.workers);
        if (classify->parsed()) return cli::cmdClassify(c);
        if (waveop->parsed()) return cli::cmdWaveop(c);
        if (growth->parsed()) return cli::cmdGrowth(c);
        if (decay->parsed()) return cli::cmdDecay(c);
        if (probe->parsed()) return cli::cmdProbe(c);
        if (cz->parsed()) return cli::cmdCz(c);
    } catch (const beamlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == beamlab::ErrorCode::IllConditioned ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
