#include <fstream>
#include <sstream>

#include "beamlab/lattice.hpp"

namespace beamlab {

// Format: one "n value" pair per line, '#' starts a comment. An optional
// "background b" line sets a constant offset seen only by applyH.
Potential Potential::fromString(const std::string& text) {
    std::map<long, double> entries;
    double background = 0.0;
    bool haveBackground = false;
    std::istringstream in(text);
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        auto where = " on line " + std::to_string(lineNo);
        if (first == "background") {
            if (haveBackground) throw Error(ErrorCode::InvalidArgument, "duplicate background" + where);
            if (!(ls >> background)) throw Error(ErrorCode::InvalidArgument, "malformed background" + where);
            haveBackground = true;
        } else {
            long n = 0;
            double value = 0.0;
            std::size_t used = 0;
            try {
                n = std::stol(first, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != first.size() || !(ls >> value))
                throw Error(ErrorCode::InvalidArgument, "expected 'n value'" + where);
            if (!entries.emplace(n, value).second)
                throw Error(ErrorCode::InvalidArgument, "duplicate index " + std::to_string(n) + where);
        }
        std::string rest;
        if (ls >> rest) throw Error(ErrorCode::InvalidArgument, "trailing tokens" + where);
    }
    return Potential(std::move(entries), background);
}

Potential Potential::fromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open potential file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return fromString(buf.str());
}

} // namespace beamlab
