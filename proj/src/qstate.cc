// Copyright 2026 The pigeonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pigeonsim/qstate.h"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>

#include "pigeonsim/errors.h"
#include "pigeonsim/tolerances.h"

namespace pigeonsim {

namespace {

constexpr size_t kMaxDenseOperatorDimension = 1024;

// Deterministic probe vectors for validating raw projectors without O(d^3) products.
std::vector<Complex> probe_vector(size_t dimension, uint64_t salt) {
    std::vector<Complex> out(dimension);
    uint64_t x = 0x9E3779B97F4A7C15ull * (salt + 1);
    auto next = [&]() {
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        return static_cast<double>((x * 0x2545F4914F6CDD1Dull) >> 11) * 0x1.0p-53 - 0.5;
    };
    for (auto &a : out) {
        double re = next();
        a = Complex(re, next());
    }
    return out;
}

std::vector<Complex> mat_vec(std::span<const Complex> matrix, std::span<const Complex> v) {
    size_t d = v.size();
    std::vector<Complex> out(d);
    for (size_t r = 0; r < d; r++) {
        Complex acc = 0;
        for (size_t c = 0; c < d; c++) {
            acc += matrix[r * d + c] * v[c];
        }
        out[r] = acc;
    }
    return out;
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
    Complex acc = 0;
    for (size_t k = 0; k < a.size(); k++) {
        acc += std::conj(a[k]) * b[k];
    }
    return acc;
}

void check_particle(const RegisterShape &shape, size_t p, const char *context) {
    if (p >= shape.num_particles()) {
        std::stringstream ss;
        ss << context << ": particle index " << p << " out of range for " << shape.str();
        throw InvalidArgument(ss.str());
    }
}

void check_box(const RegisterShape &shape, size_t b, const char *context) {
    if (b >= shape.num_boxes()) {
        std::stringstream ss;
        ss << context << ": box index " << b << " out of range for " << shape.str();
        throw InvalidArgument(ss.str());
    }
}

void check_pair(const RegisterShape &shape, size_t i, size_t j, const char *context) {
    check_particle(shape, i, context);
    check_particle(shape, j, context);
    if (i == j) {
        throw InvalidArgument(std::string(context) + ": pair needs two distinct particles");
    }
}

}  // namespace

size_t max_dimension() {
    if (const char *env = std::getenv("PIGEONSIM_MAX_DIM")) {
        char *end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<size_t>(v);
        }
    }
    return kDefaultMaxDimension;
}

void require_same_shape(const RegisterShape &a, const RegisterShape &b, const char *context) {
    if (!(a == b)) {
        throw ShapeMismatch(std::string(context) + ": shape " + a.str() + " vs " + b.str());
    }
}

RegisterShape::RegisterShape(size_t num_particles, size_t num_boxes)
    : num_particles_(num_particles), num_boxes_(num_boxes), dimension_(1) {
    if (num_particles < 1) {
        throw InvalidArgument("register needs at least 1 particle");
    }
    if (num_boxes < 2) {
        throw InvalidArgument("register needs at least 2 boxes");
    }
    size_t cap = max_dimension();
    for (size_t k = 0; k < num_particles; k++) {
        if (dimension_ > cap / num_boxes) {
            std::stringstream ss;
            ss << "dimension " << num_boxes << "^" << num_particles << " exceeds cap " << cap;
            throw DimensionCapExceeded(ss.str());
        }
        dimension_ *= num_boxes;
    }
    strides_.resize(num_particles);
    size_t s = 1;
    for (size_t p = num_particles; p-- > 0;) {
        strides_[p] = s;
        s *= num_boxes;
    }
}

std::vector<size_t> RegisterShape::digits(size_t index) const {
    std::vector<size_t> out(num_particles_);
    for (size_t p = 0; p < num_particles_; p++) {
        out[p] = digit(index, p);
    }
    return out;
}

size_t RegisterShape::index_of(std::span<const size_t> boxes) const {
    if (boxes.size() != num_particles_) {
        throw InvalidArgument("index_of: wrong number of digits");
    }
    size_t index = 0;
    for (size_t p = 0; p < num_particles_; p++) {
        check_box(*this, boxes[p], "index_of");
        index += boxes[p] * strides_[p];
    }
    return index;
}

std::string RegisterShape::str() const {
    std::stringstream ss;
    ss << "(N=" << num_particles_ << ", M=" << num_boxes_ << ")";
    return ss.str();
}

StateVector::StateVector(RegisterShape shape, std::vector<Complex> amplitudes)
    : shape_(std::move(shape)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != shape_.dimension()) {
        throw ShapeMismatch("amplitude count does not match register dimension");
    }
    for (const auto &a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw InvalidArgument("non-finite amplitude");
        }
    }
}

StateVector StateVector::basis(const RegisterShape &shape, size_t index) {
    if (index >= shape.dimension()) {
        throw InvalidArgument("basis index out of range");
    }
    std::vector<Complex> amps(shape.dimension());
    amps[index] = 1;
    return StateVector(shape, std::move(amps));
}

StateVector StateVector::zero(const RegisterShape &shape) {
    return StateVector(shape, std::vector<Complex>(shape.dimension()));
}

double StateVector::norm2() const {
    double acc = 0;
    for (const auto &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

double StateVector::norm() const {
    return std::sqrt(norm2());
}

bool StateVector::is_normalized() const {
    return std::abs(norm() - 1) <= identity_tol(dimension());
}

StateVector StateVector::normalized() const {
    double n = norm();
    if (n <= kOrthogonalThreshold) {
        throw InvalidArgument("cannot normalize a zero vector");
    }
    return scaled(1.0 / n);
}

StateVector StateVector::scaled(Complex factor) const {
    std::vector<Complex> amps(amplitudes_);
    for (auto &a : amps) {
        a *= factor;
    }
    return StateVector(shape_, std::move(amps));
}

StateVector StateVector::operator+(const StateVector &other) const {
    require_same_shape(shape_, other.shape_, "StateVector::operator+");
    std::vector<Complex> amps(amplitudes_);
    for (size_t k = 0; k < amps.size(); k++) {
        amps[k] += other.amplitudes_[k];
    }
    return StateVector(shape_, std::move(amps));
}

StateVector StateVector::operator-(const StateVector &other) const {
    return *this + other.scaled(-1);
}

double StateVector::max_abs_diff(const StateVector &other) const {
    require_same_shape(shape_, other.shape_, "max_abs_diff");
    double m = 0;
    for (size_t k = 0; k < amplitudes_.size(); k++) {
        m = std::max(m, std::abs(amplitudes_[k] - other.amplitudes_[k]));
    }
    return m;
}

StateVector probe_state(const RegisterShape &shape, uint64_t salt) {
    return StateVector(shape, probe_vector(shape.dimension(), salt));
}

StateVector plus_state(size_t num_boxes) {
    return phase_state(num_boxes, 0.0);
}

StateVector phase_state(size_t num_boxes, double theta) {
    RegisterShape shape(1, num_boxes);
    double scale = 1.0 / std::sqrt(static_cast<double>(num_boxes));
    std::vector<Complex> amps(num_boxes);
    for (size_t k = 0; k < num_boxes; k++) {
        amps[k] = theta == 0.0 ? Complex(scale, 0) : std::polar(scale, theta * static_cast<double>(k));
    }
    return StateVector(shape, std::move(amps));
}

std::vector<StateVector> fourier_basis(size_t num_boxes) {
    (void)RegisterShape(1, num_boxes);
    std::vector<StateVector> out;
    out.reserve(num_boxes);
    double m_boxes = static_cast<double>(num_boxes);
    for (size_t m = 0; m < num_boxes; m++) {
        out.push_back(phase_state(num_boxes, std::numbers::pi / m_boxes + 2 * std::numbers::pi * m / m_boxes));
    }
    return out;
}

StateVector tensor(std::span<const StateVector> factors) {
    if (factors.empty()) {
        throw InvalidArgument("tensor of an empty list");
    }
    size_t boxes = factors[0].shape().num_boxes();
    size_t particles = 0;
    for (const auto &f : factors) {
        if (f.shape().num_boxes() != boxes) {
            throw ShapeMismatch("tensor: factors have different box counts");
        }
        particles += f.shape().num_particles();
    }
    RegisterShape shape(particles, boxes);
    std::vector<Complex> amps{Complex(1)};
    for (const auto &f : factors) {
        std::vector<Complex> next;
        next.reserve(amps.size() * f.dimension());
        for (const auto &a : amps) {
            for (const auto &b : f.amplitudes()) {
                next.push_back(a * b);
            }
        }
        amps = std::move(next);
    }
    return StateVector(shape, std::move(amps));
}

StateVector tensor(std::initializer_list<StateVector> factors) {
    return tensor(std::span<const StateVector>(factors.begin(), factors.size()));
}

Complex inner(const StateVector &a, const StateVector &b) {
    require_same_shape(a.shape(), b.shape(), "inner");
    return dot(a.amplitudes(), b.amplitudes());
}

ProjectorSpec::ProjectorSpec(RegisterShape shape, Kind kind, std::vector<Complex> product_vector)
    : shape_(std::move(shape)), kind_(std::move(kind)), product_vector_(std::move(product_vector)) {
}

ProjectorSpec ProjectorSpec::same_pair(const RegisterShape &shape, size_t i, size_t j) {
    check_pair(shape, i, j, "same_pair");
    return ProjectorSpec(shape, SamePair{i, j});
}

ProjectorSpec ProjectorSpec::diff_pair(const RegisterShape &shape, size_t i, size_t j) {
    check_pair(shape, i, j, "diff_pair");
    return ProjectorSpec(shape, DiffPair{i, j});
}

ProjectorSpec ProjectorSpec::box_pair(
    const RegisterShape &shape, size_t i, size_t j, size_t box_i, size_t box_j) {
    check_pair(shape, i, j, "box_pair");
    check_box(shape, box_i, "box_pair");
    check_box(shape, box_j, "box_pair");
    return ProjectorSpec(shape, BoxPair{i, j, box_i, box_j});
}

ProjectorSpec ProjectorSpec::single_box(const RegisterShape &shape, size_t particle, size_t box) {
    check_particle(shape, particle, "single_box");
    check_box(shape, box, "single_box");
    return ProjectorSpec(shape, SingleBox{particle, box});
}

ProjectorSpec ProjectorSpec::product_post(const RegisterShape &shape, std::vector<StateVector> factors) {
    for (const auto &f : factors) {
        if (!f.is_normalized()) {
            throw InvalidArgument("product_post: factors must be normalized");
        }
    }
    StateVector product = tensor(factors);
    require_same_shape(shape, product.shape(), "product_post");
    std::vector<Complex> vec(product.amplitudes().begin(), product.amplitudes().end());
    return ProjectorSpec(shape, ProductPost{std::move(factors)}, std::move(vec));
}

ProjectorSpec ProjectorSpec::raw(const RegisterShape &shape, std::vector<Complex> matrix) {
    size_t d = shape.dimension();
    if (d > kMaxDenseOperatorDimension) {
        throw DimensionCapExceeded("raw projector: dense matrices are limited to dimension 1024");
    }
    if (matrix.size() != d * d) {
        throw ShapeMismatch("raw projector: matrix size does not match register");
    }
    double tol = identity_tol(d);
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            if (std::abs(matrix[r * d + c] - std::conj(matrix[c * d + r])) > tol) {
                throw InvalidArgument("raw projector is not Hermitian");
            }
        }
    }
    for (uint64_t salt = 0; salt < 3; salt++) {
        auto v = probe_vector(d, salt);
        auto pv = mat_vec(matrix, v);
        auto ppv = mat_vec(matrix, pv);
        for (size_t k = 0; k < d; k++) {
            if (std::abs(ppv[k] - pv[k]) > tol * std::max(1.0, std::sqrt(static_cast<double>(d)))) {
                throw InvalidArgument("raw projector is not idempotent");
            }
        }
    }
    return ProjectorSpec(shape, RawProjector{std::move(matrix)});
}

ProjectorSpec ProjectorSpec::identity(const RegisterShape &shape) {
    size_t d = shape.dimension();
    std::vector<Complex> m(d * d);
    for (size_t k = 0; k < d; k++) {
        m[k * d + k] = 1;
    }
    return raw(shape, std::move(m));
}

std::string ProjectorSpec::describe() const {
    std::stringstream ss;
    std::visit(
        [&](const auto &k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SamePair>) {
                ss << "same(" << k.i + 1 << "," << k.j + 1 << ")";
            } else if constexpr (std::is_same_v<T, DiffPair>) {
                ss << "diff(" << k.i + 1 << "," << k.j + 1 << ")";
            } else if constexpr (std::is_same_v<T, BoxPair>) {
                ss << "boxes(" << k.i + 1 << ":" << k.box_i << "," << k.j + 1 << ":" << k.box_j << ")";
            } else if constexpr (std::is_same_v<T, SingleBox>) {
                ss << "box(" << k.particle + 1 << ":" << k.box << ")";
            } else if constexpr (std::is_same_v<T, ProductPost>) {
                ss << "product(" << k.factors.size() << " factors)";
            } else {
                ss << "raw";
            }
        },
        kind_);
    return ss.str();
}

StateVector apply(const ProjectorSpec &projector, const StateVector &state) {
    require_same_shape(projector.shape(), state.shape(), "apply");
    const RegisterShape &shape = state.shape();
    auto in = state.amplitudes();
    std::vector<Complex> out(in.begin(), in.end());
    auto keep_if = [&](auto &&pred) {
        for (size_t idx = 0; idx < out.size(); idx++) {
            if (!pred(idx)) {
                out[idx] = 0;
            }
        }
    };
    std::visit(
        [&](const auto &k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, SamePair>) {
                keep_if([&](size_t idx) {
                    return shape.digit(idx, k.i) == shape.digit(idx, k.j);
                });
            } else if constexpr (std::is_same_v<T, DiffPair>) {
                keep_if([&](size_t idx) {
                    return shape.digit(idx, k.i) != shape.digit(idx, k.j);
                });
            } else if constexpr (std::is_same_v<T, BoxPair>) {
                keep_if([&](size_t idx) {
                    return shape.digit(idx, k.i) == k.box_i && shape.digit(idx, k.j) == k.box_j;
                });
            } else if constexpr (std::is_same_v<T, SingleBox>) {
                keep_if([&](size_t idx) {
                    return shape.digit(idx, k.particle) == k.box;
                });
            } else if constexpr (std::is_same_v<T, ProductPost>) {
                const auto &phi = projector.product_vector_;
                Complex overlap = dot(phi, in);
                for (size_t idx = 0; idx < out.size(); idx++) {
                    out[idx] = phi[idx] * overlap;
                }
            } else {
                out = mat_vec(k.matrix, in);
            }
        },
        projector.kind());
    return StateVector(shape, std::move(out));
}

DenseOperator::DenseOperator(RegisterShape shape, std::vector<Complex> matrix)
    : shape_(std::move(shape)), matrix_(std::move(matrix)) {
    size_t d = shape_.dimension();
    if (d > kMaxDenseOperatorDimension) {
        throw DimensionCapExceeded("dense operators are limited to dimension 1024");
    }
    if (matrix_.size() != d * d) {
        throw ShapeMismatch("operator matrix size does not match register");
    }
}

DenseOperator DenseOperator::from_projector(const ProjectorSpec &projector) {
    const RegisterShape &shape = projector.shape();
    size_t d = shape.dimension();
    if (d > kMaxDenseOperatorDimension) {
        throw DimensionCapExceeded("dense operators are limited to dimension 1024");
    }
    std::vector<Complex> m(d * d);
    for (size_t c = 0; c < d; c++) {
        StateVector col = pigeonsim::apply(projector, StateVector::basis(shape, c));
        for (size_t r = 0; r < d; r++) {
            m[r * d + c] = col[r];
        }
    }
    return DenseOperator(shape, std::move(m));
}

DenseOperator DenseOperator::identity(const RegisterShape &shape) {
    size_t d = shape.dimension();
    std::vector<Complex> m(d * d);
    for (size_t k = 0; k < d; k++) {
        m[k * d + k] = 1;
    }
    return DenseOperator(shape, std::move(m));
}

DenseOperator DenseOperator::operator+(const DenseOperator &other) const {
    require_same_shape(shape_, other.shape_, "DenseOperator::operator+");
    std::vector<Complex> m(matrix_);
    for (size_t k = 0; k < m.size(); k++) {
        m[k] += other.matrix_[k];
    }
    return DenseOperator(shape_, std::move(m));
}

DenseOperator DenseOperator::scaled(Complex factor) const {
    std::vector<Complex> m(matrix_);
    for (auto &x : m) {
        x *= factor;
    }
    return DenseOperator(shape_, std::move(m));
}

StateVector DenseOperator::apply(const StateVector &state) const {
    require_same_shape(shape_, state.shape(), "DenseOperator::apply");
    return StateVector(shape_, mat_vec(matrix_, state.amplitudes()));
}

}  // namespace pigeonsim
