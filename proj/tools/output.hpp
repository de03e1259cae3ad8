#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "beamlab/fit.hpp"
#include "beamlab/lattice.hpp"

namespace cli {

inline constexpr int kSchemaVersion = 1;

/// CSV writer with 17 significant digits.
class Csv {
public:
    Csv(const std::filesystem::path& path, const std::vector<std::string>& header);
    ~Csv();
    Csv(const Csv&) = delete;
    Csv& operator=(const Csv&) = delete;

    Csv& operator<<(double x);
    Csv& operator<<(long x);
    Csv& operator<<(const std::string& x);
    void endRow();

private:
    std::FILE* file_;
    bool first_ = true;
    std::string path_;
};

nlohmann::json toJson(const beamlab::LinearFit& f);
nlohmann::json toJson(beamlab::cplx z);

/// Writes {schemaVersion, command, config, result} to out/name and echoes it on stdout.
void writeSummary(const std::filesystem::path& dir, const std::string& name, const std::string& command,
                  const nlohmann::json& config, const nlohmann::json& result);

} // namespace cli
