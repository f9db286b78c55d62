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

#ifndef PIGEONSIM_QSTATE_H
#define PIGEONSIM_QSTATE_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pigeonsim {

using Complex = std::complex<double>;

/// Largest register dimension accepted. Defaults to 2^20; the PIGEONSIM_MAX_DIM
/// environment variable overrides it.
size_t max_dimension();

/// N particles, each living in one of M boxes. Amplitude index is the mixed-radix
/// configuration with particle 0 as the most significant digit.
class RegisterShape {
   public:
    RegisterShape(size_t num_particles, size_t num_boxes);

    size_t num_particles() const {
        return num_particles_;
    }
    size_t num_boxes() const {
        return num_boxes_;
    }
    size_t dimension() const {
        return dimension_;
    }
    size_t stride(size_t particle) const {
        return strides_[particle];
    }
    /// Box occupied by `particle` in configuration `index`.
    size_t digit(size_t index, size_t particle) const {
        return (index / strides_[particle]) % num_boxes_;
    }
    std::vector<size_t> digits(size_t index) const;
    size_t index_of(std::span<const size_t> boxes) const;

    bool operator==(const RegisterShape &other) const {
        return num_particles_ == other.num_particles_ && num_boxes_ == other.num_boxes_;
    }

    std::string str() const;

   private:
    size_t num_particles_;
    size_t num_boxes_;
    size_t dimension_;
    std::vector<size_t> strides_;
};

class StateVector {
   public:
    StateVector(RegisterShape shape, std::vector<Complex> amplitudes);

    /// Computational basis state |index>.
    static StateVector basis(const RegisterShape &shape, size_t index);
    static StateVector zero(const RegisterShape &shape);

    const RegisterShape &shape() const {
        return shape_;
    }
    size_t dimension() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    Complex operator[](size_t index) const {
        return amplitudes_[index];
    }

    double norm2() const;
    double norm() const;
    bool is_normalized() const;
    StateVector normalized() const;
    StateVector scaled(Complex factor) const;
    StateVector operator+(const StateVector &other) const;
    StateVector operator-(const StateVector &other) const;

    /// Largest entrywise modulus of the difference.
    double max_abs_diff(const StateVector &other) const;

   private:
    RegisterShape shape_;
    std::vector<Complex> amplitudes_;
};

/// (1/sqrt(M)) sum_k |k>.
StateVector plus_state(size_t num_boxes);

/// (1/sqrt(M)) sum_k e^{i theta k} |k>, boxes k = 0..M-1.
StateVector phase_state(size_t num_boxes, double theta);

/// Element m is (1/sqrt(M)) sum_k e^{i (pi/M + 2 pi m / M) k} |k>; element 0 is phase_state(M, pi/M).
std::vector<StateVector> fourier_basis(size_t num_boxes);

/// Product of single-particle (or smaller register) states sharing the same box count.
StateVector tensor(std::span<const StateVector> factors);
StateVector tensor(std::initializer_list<StateVector> factors);

/// <a|b>, conjugate-linear in `a`.
Complex inner(const StateVector &a, const StateVector &b);

struct SamePair {
    size_t i, j;
};
struct DiffPair {
    size_t i, j;
};
struct BoxPair {
    size_t i, j, box_i, box_j;
};
struct SingleBox {
    size_t particle, box;
};
/// |phi_1 ... phi_N><phi_1 ... phi_N| for normalized single-particle factors.
struct ProductPost {
    std::vector<StateVector> factors;
};
/// Row-major dense projector matrix.
struct RawProjector {
    std::vector<Complex> matrix;
};

class ProjectorSpec {
   public:
    using Kind = std::variant<SamePair, DiffPair, BoxPair, SingleBox, ProductPost, RawProjector>;

    static ProjectorSpec same_pair(const RegisterShape &shape, size_t i, size_t j);
    static ProjectorSpec diff_pair(const RegisterShape &shape, size_t i, size_t j);
    static ProjectorSpec box_pair(const RegisterShape &shape, size_t i, size_t j, size_t box_i, size_t box_j);
    static ProjectorSpec single_box(const RegisterShape &shape, size_t particle, size_t box);
    static ProjectorSpec product_post(const RegisterShape &shape, std::vector<StateVector> factors);
    /// Validates hermiticity and idempotence.
    static ProjectorSpec raw(const RegisterShape &shape, std::vector<Complex> matrix);
    static ProjectorSpec identity(const RegisterShape &shape);

    const RegisterShape &shape() const {
        return shape_;
    }
    const Kind &kind() const {
        return kind_;
    }
    std::string describe() const;

   private:
    ProjectorSpec(RegisterShape shape, Kind kind, std::vector<Complex> product_vector = {});

    friend StateVector apply(const ProjectorSpec &, const StateVector &);

    RegisterShape shape_;
    Kind kind_;
    // Cached tensor of ProductPost factors.
    std::vector<Complex> product_vector_;
};

/// P|s>, not renormalized.
StateVector apply(const ProjectorSpec &projector, const StateVector &state);

/// Arbitrary dense operator on a register, used for weak values of non-projector observables.
class DenseOperator {
   public:
    DenseOperator(RegisterShape shape, std::vector<Complex> matrix);
    static DenseOperator from_projector(const ProjectorSpec &projector);
    static DenseOperator identity(const RegisterShape &shape);

    const RegisterShape &shape() const {
        return shape_;
    }
    Complex at(size_t row, size_t col) const {
        return matrix_[row * shape_.dimension() + col];
    }
    DenseOperator operator+(const DenseOperator &other) const;
    DenseOperator scaled(Complex factor) const;

    StateVector apply(const StateVector &state) const;

   private:
    RegisterShape shape_;
    std::vector<Complex> matrix_;
};

/// Deterministic pseudo-random vector (entries in the unit square) used to probe operator identities.
StateVector probe_state(const RegisterShape &shape, uint64_t salt);

void require_same_shape(const RegisterShape &a, const RegisterShape &b, const char *context);

}  // namespace pigeonsim

#endif
