#include "gptlab/gptfile.hpp"

#include "gptlab/basis.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gptlab {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_block(std::ostream& os, const Eigen::MatrixXd& block) {
    for (int i = 0; i < block.rows(); ++i) {
        for (int j = 0; j < block.cols(); ++j) {
            if (j) os << ',';
            os << format_double(block(i, j));
        }
        os << '\n';
    }
}

std::string next_line(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) return line;
    }
    throw InadmissibleError("gpt file: unexpected end of file");
}

double parse_double(const std::string& s) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        while (used < s.size() && std::isspace((unsigned char)s[used])) ++used;
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw InadmissibleError("gpt file: bad number '" + s + "'");
    }
}

void read_block(std::istream& is, Eigen::MatrixXd& block, int N) {
    block.resize(N, N);
    for (int i = 0; i < N; ++i) {
        std::stringstream row(next_line(is));
        std::string cell;
        for (int j = 0; j < N; ++j) {
            if (!std::getline(row, cell, ','))
                throw InadmissibleError("gpt file: short row in block");
            block(i, j) = parse_double(cell);
        }
        if (std::getline(row, cell, ','))
            throw InadmissibleError("gpt file: extra values in row");
    }
}

}  // namespace

void GPTFile::write(std::ostream& os) const {
    os << "gptlab-gpt-version," << version << '\n';
    os << "order," << table.max_order() << '\n';
    os << "radius," << format_double(radius) << '\n';
    write_block(os, table.block_cc());
    write_block(os, table.block_cs());
    write_block(os, table.block_sc());
    write_block(os, table.block_ss());
}

void GPTFile::write(const std::string& path) const {
    std::ofstream os(path);
    if (!os) throw InadmissibleError("gpt file: cannot open '" + path + "' for writing");
    write(os);
}

GPTFile GPTFile::read(std::istream& is) {
    GPTFile f;
    auto header_value = [&](const char* key) {
        std::string line = next_line(is);
        auto comma = line.find(',');
        if (comma == std::string::npos || line.substr(0, comma) != key)
            throw InadmissibleError(std::string("gpt file: expected header line '") + key + "'");
        return line.substr(comma + 1);
    };
    f.version = (int)parse_double(header_value("gptlab-gpt-version"));
    if (f.version != 1) throw InadmissibleError("gpt file: unsupported version");
    int N = (int)parse_double(header_value("order"));
    if (N < 1) throw InadmissibleError("gpt file: order must be >= 1");
    f.radius = parse_double(header_value("radius"));
    if (!(f.radius > 0.0)) throw InadmissibleError("gpt file: radius must be positive");
    f.table = ContractedGPTTable(N);
    read_block(is, f.table.block_cc(), N);
    read_block(is, f.table.block_cs(), N);
    read_block(is, f.table.block_sc(), N);
    read_block(is, f.table.block_ss(), N);
    return f;
}

GPTFile GPTFile::read(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw InadmissibleError("gpt file: cannot open '" + path + "'");
    return read(is);
}

}  // namespace gptlab
