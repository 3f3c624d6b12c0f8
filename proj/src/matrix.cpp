#include "ssm/matrix.hpp"

#include "ssm/errors.hpp"

namespace ssm {

Matrix slice_rows(const Matrix& m, std::size_t first, std::size_t count) {
    if (first + count > m.rows())
        throw ValidationError("slice_rows: range [" + std::to_string(first) + ", " +
                              std::to_string(first + count) + ") exceeds " +
                              std::to_string(m.rows()) + " rows");
    Matrix out(count, m.cols());
    for (std::size_t r = 0; r < count; ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(first + r, c);
    return out;
}

Vector row_of(const Matrix& m, std::size_t r) {
    if (r >= m.rows())
        throw ValidationError("row_of: row " + std::to_string(r) + " out of range");
    Vector v(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) v[c] = m(r, c);
    return v;
}

}  // namespace ssm
