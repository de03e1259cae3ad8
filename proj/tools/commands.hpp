#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cli {

struct RunConfig {
    std::string potential;
    long window = 32;
    double tol = 1e-8;
    double mu0 = 0.1;
    double quadTol = 1e-7;
    std::string out = ".";
    std::uint64_t seed = 1;
    unsigned workers = 0;

    std::string threshold = "zero";
    std::string side = "plus";
    std::string kind = "blowup";
    std::string kernel = "kt1";
    std::vector<long> Ns;
    std::vector<std::string> ps;
    long offset = 2;
    double a = 0.0;
    double tmin = 100.0;
    double tmax = 10000.0;
    int points = 17;
    int probes = 64;
    bool perturbed = false;
};

int cmdClassify(const RunConfig& c);
int cmdWaveop(const RunConfig& c);
int cmdGrowth(const RunConfig& c);
int cmdDecay(const RunConfig& c);
int cmdProbe(const RunConfig& c);
int cmdCz(const RunConfig& c);

} // namespace cli
