#pragma once

#include "gptlab/gpt.hpp"

#include <iosfwd>
#include <string>

namespace gptlab {

/// Serialized form of a ContractedGPTTable: a three-line header
/// (format version, order, radius) followed by the cc, cs, sc, ss
/// blocks as N rows of comma-separated values each.
struct GPTFile {
    int version = 1;
    double radius = 1.0;
    ContractedGPTTable table{1};

    void write(std::ostream& os) const;
    void write(const std::string& path) const;
    static GPTFile read(std::istream& is);
    static GPTFile read(const std::string& path);
};

}  // namespace gptlab
