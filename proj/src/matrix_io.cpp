#include "bbols/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bbols::io {
namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw std::runtime_error(origin + ": " + what);
}

}  // namespace

BlockMatrix read_matrix(std::istream& in, const std::string& origin) {
    long long m = 0, n = 0, d = 0;
    if (!(in >> m >> n >> d)) fail(origin, "missing 'm n d' header");
    if (m <= 0 || n <= 0 || d <= 0) {
        fail(origin, "header dimensions must be positive");
    }
    if (n % d != 0) fail(origin, "block width does not divide columns");
    BlockMatrix D(static_cast<std::size_t>(m), static_cast<std::size_t>(n),
                  static_cast<std::size_t>(d));
    for (long long i = 0; i < m; ++i) {
        for (long long j = 0; j < n; ++j) {
            double v;
            if (!(in >> v)) {
                std::ostringstream msg;
                msg << "expected " << m * n << " entries, ran out at row "
                    << i << ", column " << j;
                fail(origin, msg.str());
            }
            D.col(static_cast<std::size_t>(j))[static_cast<std::size_t>(i)] =
                v;
        }
    }
    return D;
}

BlockMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open for reading");
    return read_matrix(in, path);
}

void write_matrix(std::ostream& out, const BlockMatrix& D) {
    out << D.m << ' ' << D.n << ' ' << D.d << '\n';
    char buf[32];
    for (std::size_t i = 0; i < D.m; ++i) {
        for (std::size_t j = 0; j < D.n; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", D.col(j)[i]);
            out << buf << (j + 1 == D.n ? '\n' : ' ');
        }
    }
}

void write_matrix_file(const std::string& path, const BlockMatrix& D) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    write_matrix(out, D);
}

std::vector<double> read_vector_file(const std::string& path) {
    const BlockMatrix M = read_matrix_file(path);
    if (M.n != 1) {
        throw std::runtime_error(path +
                                 ": expected a single-column vector file");
    }
    return std::vector<double>(M.a.begin(), M.a.end());
}

void write_vector_file(const std::string& path,
                       const std::vector<double>& v) {
    BlockMatrix M(v.size(), 1, 1);
    M.a = v;
    write_matrix_file(path, M);
}

}  // namespace bbols::io
