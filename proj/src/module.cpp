#include "module.hpp"

#include <algorithm>
#include <string>

namespace pmod {

zigzag_shape::zigzag_shape(uint32_t n_points, std::vector<direction> dirs)
    : n_(n_points), dirs_(std::move(dirs)) {
    if (n_ == 0) throw usage_error("shape needs at least one point");
    if (dirs_.size() + 1 != n_)
        throw usage_error("shape with " + std::to_string(n_) + " points needs " +
                          std::to_string(n_ - 1) + " arrow directions");
}

std::vector<uint32_t> zigzag_shape::extrema() const {
    std::vector<uint32_t> out{0};
    for (uint32_t i = 1; i + 1 < n_; ++i)
        if (dirs_[i - 1] != dirs_[i]) out.push_back(i);
    if (n_ > 1) out.push_back(n_ - 1);
    return out;
}

bool zigzag_shape::monotone() const { return extrema().size() <= 2; }

persistence_module::persistence_module(zigzag_shape shape, std::vector<uint32_t> dims,
                                       std::vector<matrix> maps, fp_field field)
    : shape_(std::move(shape)), dims_(std::move(dims)), maps_(std::move(maps)), f_(field) {
    if (dims_.size() != shape_.points()) throw usage_error("one dimension per point required");
    if (maps_.size() + 1 != shape_.points() && !(shape_.points() == 1 && maps_.empty()))
        throw usage_error("one map per arrow required");
    for (uint32_t i = 0; i + 1 < shape_.points(); ++i) {
        const matrix& m = maps_[i];
        if (m.field() != f_) throw usage_error("map field mismatch at arrow " + std::to_string(i));
        uint32_t want_rows = shape_.dir(i) == direction::forward ? dims_[i + 1] : dims_[i];
        uint32_t want_cols = shape_.dir(i) == direction::forward ? dims_[i] : dims_[i + 1];
        if (m.rows() != want_rows || m.cols() != want_cols)
            throw usage_error("map shape mismatch at arrow " + std::to_string(i));
    }
}

uint32_t persistence_module::total_dim() const {
    uint32_t t = 0;
    for (uint32_t d : dims_) t += d;
    return t;
}

bool persistence_module::operator==(const persistence_module& o) const {
    return shape_ == o.shape_ && dims_ == o.dims_ && f_ == o.f_ && maps_ == o.maps_;
}

persistence_module constant_module(const zigzag_shape& shape, interval itv, fp_field field) {
    if (itv.hi >= shape.points() || itv.lo > itv.hi)
        throw usage_error("interval out of range for shape");
    std::vector<uint32_t> dims(shape.points(), 0);
    for (uint32_t x = itv.lo; x <= itv.hi; ++x) dims[x] = 1;
    std::vector<matrix> maps;
    for (uint32_t i = 0; i + 1 < shape.points(); ++i) {
        uint32_t src = shape.dir(i) == direction::forward ? i : i + 1;
        uint32_t dst = shape.dir(i) == direction::forward ? i + 1 : i;
        matrix m(dims[dst], dims[src], field);
        if (itv.contains(src) && itv.contains(dst)) m.at(0, 0) = 1;
        maps.push_back(std::move(m));
    }
    return {shape, std::move(dims), std::move(maps), field};
}

persistence_module reverse_module(const persistence_module& v) {
    const uint32_t n = v.points();
    std::vector<uint32_t> dims(v.dims().rbegin(), v.dims().rend());
    std::vector<direction> dirs;
    std::vector<matrix> maps;
    for (uint32_t i = n - 1; i-- > 0;) {
        dirs.push_back(flip(v.shape().dir(i)));
        maps.push_back(v.map(i));
    }
    return {zigzag_shape(n, std::move(dirs)), std::move(dims), std::move(maps), v.field()};
}

persistence_module dual_module(const persistence_module& v) {
    const uint32_t n = v.points();
    std::vector<uint32_t> dims(v.dims().rbegin(), v.dims().rend());
    std::vector<direction> dirs;
    std::vector<matrix> maps;
    for (uint32_t i = n - 1; i-- > 0;) {
        dirs.push_back(v.shape().dir(i));
        maps.push_back(v.map(i).transposed());
    }
    return {zigzag_shape(n, std::move(dirs)), std::move(dims), std::move(maps), v.field()};
}

persistence_module restrict(const persistence_module& v, uint32_t lo, uint32_t hi) {
    if (lo > hi || hi >= v.points()) throw usage_error("restriction range out of bounds");
    std::vector<uint32_t> dims(v.dims().begin() + lo, v.dims().begin() + hi + 1);
    std::vector<direction> dirs;
    std::vector<matrix> maps;
    for (uint32_t i = lo; i < hi; ++i) {
        dirs.push_back(v.shape().dir(i));
        maps.push_back(v.map(i));
    }
    return {zigzag_shape(hi - lo + 1, std::move(dirs)), std::move(dims), std::move(maps), v.field()};
}

void barcode::add(interval itv, uint32_t mult) {
    if (mult == 0) return;
    auto it = std::lower_bound(bars_.begin(), bars_.end(), itv,
                               [](const auto& a, interval b) { return a.first < b; });
    if (it != bars_.end() && it->first == itv)
        it->second += mult;
    else
        bars_.insert(it, {itv, mult});
}

uint32_t barcode::multiplicity(interval itv) const {
    for (const auto& [i, m] : bars_)
        if (i == itv) return m;
    return 0;
}

size_t barcode::total() const {
    size_t t = 0;
    for (const auto& [i, m] : bars_) t += m;
    return t;
}

barcode barcode::reversed(uint32_t n_points) const {
    barcode out;
    for (const auto& [i, m] : bars_)
        out.add({n_points - 1 - i.hi, n_points - 1 - i.lo}, m);
    return out;
}

barcode barcode_of(const decomposition& d) {
    barcode out;
    for (const summand& s : d.parts) out.add(s.itv);
    return out;
}

summand extend_by_zero(const summand& u, uint32_t range_lo, uint32_t range_hi,
                       const std::vector<uint32_t>& local_cuts) {
    if (u.itv.hi > range_hi - range_lo)
        throw usage_error("summand exceeds its range");
    for (uint32_t cut : local_cuts)
        if (u.itv.contains(cut))
            throw usage_error("summand is nonzero at cut point " + std::to_string(cut) +
                              "; extension by zero needs a zero fiber there");
    return {{u.itv.lo + range_lo, u.itv.hi + range_lo}, u.gens};
}

}  // namespace pmod
