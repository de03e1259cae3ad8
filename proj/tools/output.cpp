#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "beamlab/errors.hpp"

namespace cli {

Csv::Csv(const std::filesystem::path& path, const std::vector<std::string>& header) : path_(path.string()) {
    file_ = std::fopen(path_.c_str(), "w");
    if (!file_) throw beamlab::Error(beamlab::ErrorCode::Io, "cannot write " + path_);
    for (std::size_t i = 0; i < header.size(); ++i) std::fprintf(file_, "%s%s", i ? "," : "", header[i].c_str());
    std::fprintf(file_, "\n");
}

Csv::~Csv() {
    if (file_) std::fclose(file_);
}

Csv& Csv::operator<<(double x) {
    std::fprintf(file_, "%s%.17g", first_ ? "" : ",", x);
    first_ = false;
    return *this;
}

Csv& Csv::operator<<(long x) {
    std::fprintf(file_, "%s%ld", first_ ? "" : ",", x);
    first_ = false;
    return *this;
}

Csv& Csv::operator<<(const std::string& x) {
    std::fprintf(file_, "%s%s", first_ ? "" : ",", x.c_str());
    first_ = false;
    return *this;
}

void Csv::endRow() {
    std::fprintf(file_, "\n");
    first_ = true;
}

nlohmann::json toJson(const beamlab::LinearFit& f) {
    return {{"slope", f.slope}, {"intercept", f.intercept}, {"correlation", f.correlation}, {"points", f.points}};
}

nlohmann::json toJson(beamlab::cplx z) { return {z.real(), z.imag()}; }

void writeSummary(const std::filesystem::path& dir, const std::string& name, const std::string& command,
                  const nlohmann::json& config, const nlohmann::json& result) {
    const nlohmann::json doc = {
        {"schemaVersion", kSchemaVersion}, {"command", command}, {"config", config}, {"result", result}};
    const auto path = dir / name;
    std::ofstream out(path);
    if (!out) throw beamlab::Error(beamlab::ErrorCode::Io, "cannot write " + path.string());
    out << doc.dump(2) << "\n";
    std::cout << doc.dump(2) << "\n";
}

} // namespace cli
