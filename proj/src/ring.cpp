#include "leezk/ring.hpp"

#include <stdexcept>

#include "leezk/bytes.hpp"

namespace leezk {

Modulus::Modulus(int32_t modulus) : m(modulus), ell(modulus / 2) {
    if (m < 4) throw std::invalid_argument("modulus must be at least 4");
    if (m > 65535) throw std::invalid_argument("modulus exceeds 16-bit representative bound");
}

int16_t center_mod(int64_t x, const Modulus& mod) {
    int64_t r = x % mod.m;
    if (r < 0) r += mod.m;
    if (r > mod.ell) r -= mod.m;
    return static_cast<int16_t>(r);
}

ZmVector::ZmVector(const Modulus& mod, std::span<const int64_t> raw) : mod_(mod) {
    entries_.reserve(raw.size());
    for (int64_t x : raw) entries_.push_back(center_mod(x, mod));
}

ZmVector ZmVector::zeros(const Modulus& mod, size_t n) {
    ZmVector v;
    v.mod_ = mod;
    v.entries_.assign(n, 0);
    return v;
}

ZmVector ZmVector::from_canonical(const Modulus& mod, std::vector<int16_t> entries) {
    for (int16_t x : entries) {
        if (!mod.canonical(x)) throw std::invalid_argument("entry outside canonical range");
    }
    ZmVector v;
    v.mod_ = mod;
    v.entries_ = std::move(entries);
    return v;
}

ZmVector ZmVector::random(const Modulus& mod, size_t n, Rng& rng) {
    ZmVector v;
    v.mod_ = mod;
    v.entries_.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        v.entries_.push_back(static_cast<int16_t>(rng.uniform(mod.min_rep(), mod.max_rep())));
    }
    return v;
}

ZmVector ZmVector::negated() const { return scaled(-1); }

ZmVector ZmVector::scaled(int64_t c) const {
    ZmVector out;
    out.mod_ = mod_;
    out.entries_.reserve(size());
    for (int16_t x : entries_) out.entries_.push_back(center_mod(c * x, mod_));
    return out;
}

ZmVector ZmVector::slice(size_t from, size_t len) const {
    if (from + len > size()) throw std::out_of_range("vector slice out of range");
    ZmVector out;
    out.mod_ = mod_;
    out.entries_.assign(entries_.begin() + from, entries_.begin() + from + len);
    return out;
}

namespace {

void require_same_shape(const ZmVector& a, const ZmVector& b) {
    if (a.modulus() != b.modulus()) throw std::invalid_argument("modulus mismatch");
    if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
}

void require_same_shape(const ZmMatrix& a, const ZmMatrix& b) {
    if (a.modulus() != b.modulus()) throw std::invalid_argument("modulus mismatch");
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("matrix shape mismatch");
    }
}

}  // namespace

ZmVector operator+(const ZmVector& a, const ZmVector& b) {
    require_same_shape(a, b);
    std::vector<int64_t> raw(a.size());
    for (size_t i = 0; i < a.size(); ++i) raw[i] = int64_t(a[i]) + b[i];
    return ZmVector(a.modulus(), raw);
}

ZmVector operator-(const ZmVector& a, const ZmVector& b) {
    require_same_shape(a, b);
    std::vector<int64_t> raw(a.size());
    for (size_t i = 0; i < a.size(); ++i) raw[i] = int64_t(a[i]) - b[i];
    return ZmVector(a.modulus(), raw);
}

ZmVector concat(const ZmVector& a, const ZmVector& b) {
    if (a.modulus() != b.modulus()) throw std::invalid_argument("modulus mismatch");
    std::vector<int16_t> entries = a.entries();
    entries.insert(entries.end(), b.entries().begin(), b.entries().end());
    return ZmVector::from_canonical(a.modulus(), std::move(entries));
}

ZmMatrix::ZmMatrix(const Modulus& mod, size_t rows, size_t cols, std::span<const int64_t> raw)
    : mod_(mod), rows_(rows), cols_(cols) {
    if (raw.size() != rows * cols) throw std::invalid_argument("matrix entry count mismatch");
    entries_.reserve(raw.size());
    for (int64_t x : raw) entries_.push_back(center_mod(x, mod));
}

ZmMatrix ZmMatrix::zeros(const Modulus& mod, size_t rows, size_t cols) {
    ZmMatrix m;
    m.mod_ = mod;
    m.rows_ = rows;
    m.cols_ = cols;
    m.entries_.assign(rows * cols, 0);
    return m;
}

ZmMatrix ZmMatrix::identity(const Modulus& mod, size_t n) {
    ZmMatrix m = zeros(mod, n, n);
    for (size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
    return m;
}

ZmMatrix ZmMatrix::from_canonical(const Modulus& mod, size_t rows, size_t cols,
                                  std::vector<int16_t> entries) {
    if (entries.size() != rows * cols) throw std::invalid_argument("matrix entry count mismatch");
    for (int16_t x : entries) {
        if (!mod.canonical(x)) throw std::invalid_argument("entry outside canonical range");
    }
    ZmMatrix m;
    m.mod_ = mod;
    m.rows_ = rows;
    m.cols_ = cols;
    m.entries_ = std::move(entries);
    return m;
}

ZmMatrix ZmMatrix::random(const Modulus& mod, size_t rows, size_t cols, Rng& rng) {
    ZmMatrix m;
    m.mod_ = mod;
    m.rows_ = rows;
    m.cols_ = cols;
    m.entries_.reserve(rows * cols);
    for (size_t i = 0; i < rows * cols; ++i) {
        m.entries_.push_back(static_cast<int16_t>(rng.uniform(mod.min_rep(), mod.max_rep())));
    }
    return m;
}

ZmMatrix ZmMatrix::negated() const { return scaled(-1); }

ZmMatrix ZmMatrix::scaled(int64_t c) const {
    ZmMatrix out;
    out.mod_ = mod_;
    out.rows_ = rows_;
    out.cols_ = cols_;
    out.entries_.reserve(entries_.size());
    for (int16_t x : entries_) out.entries_.push_back(center_mod(c * x, mod_));
    return out;
}

ZmMatrix ZmMatrix::permuted_rows(const std::vector<uint32_t>& images) const {
    if (images.size() != rows_) throw std::invalid_argument("permutation size mismatch");
    ZmMatrix out;
    out.mod_ = mod_;
    out.rows_ = rows_;
    out.cols_ = cols_;
    out.entries_.resize(entries_.size());
    for (size_t i = 0; i < rows_; ++i) {
        if (images[i] < 1 || images[i] > rows_) throw std::out_of_range("permutation image");
        auto src = row(images[i] - 1);
        std::copy(src.begin(), src.end(), out.entries_.begin() + i * cols_);
    }
    return out;
}

ZmMatrix ZmMatrix::stack(const ZmMatrix& top, const ZmMatrix& bottom) {
    if (top.modulus() != bottom.modulus()) throw std::invalid_argument("modulus mismatch");
    if (top.cols() != bottom.cols()) throw std::invalid_argument("column count mismatch");
    ZmMatrix out;
    out.mod_ = top.mod_;
    out.rows_ = top.rows_ + bottom.rows_;
    out.cols_ = top.cols_;
    out.entries_ = top.entries_;
    out.entries_.insert(out.entries_.end(), bottom.entries_.begin(), bottom.entries_.end());
    return out;
}

ZmMatrix operator+(const ZmMatrix& a, const ZmMatrix& b) {
    require_same_shape(a, b);
    std::vector<int64_t> raw(a.entries().size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = int64_t(a.entries()[i]) + b.entries()[i];
    return ZmMatrix(a.modulus(), a.rows(), a.cols(), raw);
}

ZmMatrix operator-(const ZmMatrix& a, const ZmMatrix& b) {
    require_same_shape(a, b);
    std::vector<int64_t> raw(a.entries().size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = int64_t(a.entries()[i]) - b.entries()[i];
    return ZmMatrix(a.modulus(), a.rows(), a.cols(), raw);
}

int64_t lee_weight(const ZmVector& v) {
    int64_t w = 0;
    for (int16_t x : v.entries()) w += x < 0 ? -int64_t(x) : int64_t(x);
    return w;
}

int64_t lee_distance(const ZmVector& x, const ZmVector& y) {
    require_same_shape(x, y);
    return lee_weight(x - y);
}

int64_t vector_sum(const ZmVector& v) {
    int64_t s = 0;
    for (int16_t x : v.entries()) s += x;
    return s;
}

ZmVector syndrome(const ZmVector& v, const ZmMatrix& H) {
    if (v.modulus() != H.modulus()) throw std::invalid_argument("modulus mismatch");
    if (v.size() != H.rows()) throw std::invalid_argument("syndrome dimension mismatch");
    std::vector<int64_t> acc(H.cols(), 0);
    for (size_t i = 0; i < v.size(); ++i) {
        int64_t vi = v[i];
        if (vi == 0) continue;
        auto r = H.row(i);
        for (size_t j = 0; j < r.size(); ++j) acc[j] += vi * r[j];
    }
    return ZmVector(v.modulus(), acc);
}

std::vector<uint8_t> encode_vector(const ZmVector& v) {
    std::vector<uint8_t> out;
    out.reserve(4 + 2 * v.size());
    put_u32(out, static_cast<uint32_t>(v.size()));
    for (int16_t x : v.entries()) put_i16(out, x);
    return out;
}

std::vector<uint8_t> encode_matrix(const ZmMatrix& m) {
    std::vector<uint8_t> out;
    out.reserve(8 + 2 * m.entries().size());
    put_u32(out, static_cast<uint32_t>(m.rows()));
    put_u32(out, static_cast<uint32_t>(m.cols()));
    for (int16_t x : m.entries()) put_i16(out, x);
    return out;
}

namespace {

bool fail(std::string* err, const char* what) {
    if (err) *err = what;
    return false;
}

bool read_elements(ByteReader& r, const Modulus& mod, size_t count, std::vector<int16_t>& out,
                   std::string* err) {
    if (r.remaining() < 2 * count) return fail(err, "truncated element sequence");
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        int16_t x = *r.i16();
        if (!mod.canonical(x)) return fail(err, "element outside canonical range");
        out.push_back(x);
    }
    return true;
}

}  // namespace

std::optional<ZmVector> decode_vector(std::span<const uint8_t> bytes, const Modulus& mod,
                                      std::string* err) {
    ByteReader r(bytes);
    auto count = r.u32();
    if (!count) {
        fail(err, "truncated vector header");
        return std::nullopt;
    }
    std::vector<int16_t> entries;
    if (!read_elements(r, mod, *count, entries, err)) return std::nullopt;
    if (!r.done()) {
        fail(err, "trailing bytes after vector");
        return std::nullopt;
    }
    return ZmVector::from_canonical(mod, std::move(entries));
}

std::optional<ZmMatrix> decode_matrix(std::span<const uint8_t> bytes, const Modulus& mod,
                                      std::string* err) {
    ByteReader r(bytes);
    auto rows = r.u32();
    auto cols = r.u32();
    if (!rows || !cols) {
        fail(err, "truncated matrix header");
        return std::nullopt;
    }
    uint64_t count = uint64_t(*rows) * uint64_t(*cols);
    if (count > r.remaining() / 2) {
        fail(err, "matrix dimensions exceed payload");
        return std::nullopt;
    }
    std::vector<int16_t> entries;
    if (!read_elements(r, mod, count, entries, err)) return std::nullopt;
    if (!r.done()) {
        fail(err, "trailing bytes after matrix");
        return std::nullopt;
    }
    return ZmMatrix::from_canonical(mod, *rows, *cols, std::move(entries));
}

}  // namespace leezk
