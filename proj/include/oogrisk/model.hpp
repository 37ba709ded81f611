/*
 Copyright 2026 The oogrisk Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef OOGRISK_MODEL_HPP
#define OOGRISK_MODEL_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oogrisk {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/**
 * @brief Discrete-time state-space quadruple x+ = A x + B u, y = C x + D u.
 *
 * Any of the state, input or output dimensions may be zero. Eigen handles
 * empty products (an n x 0 times 0 x m product is an n x m zero matrix), so
 * empty blocks need no special casing downstream.
 */
struct StateSpace {
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix D;

    [[nodiscard]] Eigen::Index states() const { return A.rows(); }
    [[nodiscard]] Eigen::Index inputs() const { return B.cols(); }
    [[nodiscard]] Eigen::Index outputs() const { return C.rows(); }

    /// Throws ValidationError naming `name.<block>` on a shape mismatch.
    void validate(const std::string& name = "StateSpace") const;
};

/// Plant: x_p+ = A x_p + B u~, y = C x_p, y_p = C_J x_p + D_J u~.
struct PlantModel {
    Matrix A;
    Matrix B;
    Matrix C;
    Matrix C_J;
    Matrix D_J;

    [[nodiscard]] Eigen::Index nx() const { return A.rows(); }
    [[nodiscard]] Eigen::Index nu() const { return B.cols(); }
    [[nodiscard]] Eigen::Index nm() const { return C.rows(); }
    [[nodiscard]] Eigen::Index np() const { return C_J.rows(); }

    void validate() const;
};

/// Output-feedback controller: z+ = A_c z + B_c y~, u = C_c z + D_c y~.
struct ControllerModel {
    Matrix A_c;
    Matrix B_c;
    Matrix C_c;
    Matrix D_c;

    [[nodiscard]] Eigen::Index nz() const { return A_c.rows(); }

    /// Static gain controller (no controller state).
    static ControllerModel static_gain(const Matrix& D_c);

    void validate(const PlantModel& plant) const;
};

/// Anomaly detector: s+ = A_e s + B_e u + K_e y~, y_r = C_e s + D_e u + E_e y~.
struct DetectorModel {
    Matrix A_e;
    Matrix B_e;
    Matrix K_e;
    Matrix C_e;
    Matrix D_e;
    Matrix E_e;

    [[nodiscard]] Eigen::Index ns() const { return A_e.rows(); }
    [[nodiscard]] Eigen::Index nr() const { return E_e.rows(); }

    void validate(const PlantModel& plant) const;
};

enum class AttackMode { actuator, sensor };

const char* to_string(AttackMode mode) noexcept;
AttackMode attack_mode_from_string(const std::string& text);

/**
 * @brief Which actuator or sensor channels the adversary can inject into.
 *
 * Channels are zero-based indices into u (actuator mode) or y (sensor mode).
 * The injection matrices are stored column-compressed: B_a is n_u x n_a and
 * D_a is n_m x n_a, holding only the columns of the attacked channels, so that
 * protecting a channel removes an input of the closed loop instead of leaving a
 * zero column behind.
 */
class AttackSelection {
public:
    AttackSelection() = default;
    AttackSelection(AttackMode mode, std::vector<int> channels, Eigen::Index n_u, Eigen::Index n_m);

    [[nodiscard]] AttackMode mode() const { return mode_; }
    [[nodiscard]] const std::vector<int>& channels() const { return channels_; }
    [[nodiscard]] Eigen::Index n_a() const { return static_cast<Eigen::Index>(channels_.size()); }
    [[nodiscard]] Eigen::Index n_u() const { return n_u_; }
    [[nodiscard]] Eigen::Index n_m() const { return n_m_; }
    /// Number of channels in the attacked interface (n_u or n_m).
    [[nodiscard]] Eigen::Index interface_size() const;

    /// Diagonal 0/1 selectors.
    [[nodiscard]] Matrix E_a() const;
    [[nodiscard]] Matrix F_a() const;
    /// Column-compressed injection matrices.
    [[nodiscard]] Matrix B_a() const;
    [[nodiscard]] Matrix D_a() const;

    /// Channel label, 1-based: "A1", "S3", ...
    [[nodiscard]] std::string label(int channel) const;
    [[nodiscard]] int channel_from_label(const std::string& label) const;

    bool operator==(const AttackSelection&) const = default;

private:
    AttackMode mode_ = AttackMode::sensor;
    std::vector<int> channels_;
    Eigen::Index n_u_ = 0;
    Eigen::Index n_m_ = 0;
};

/// Operator-side description of the attacked feedback loop.
struct SystemModel {
    PlantModel plant;
    ControllerModel controller;
    DetectorModel detector;
    AttackSelection attack;
    /// Alarm threshold on the residual energy. The impact scales linearly in it.
    double residual_threshold = 1.0;

    void validate() const;
};

/**
 * @brief Closed loop under attack, from the injected signal a to the
 * performance output y_p and the detector residual y_r.
 *
 * State ordering is (plant, controller, detector).
 */
struct ClosedLoopSystem {
    Matrix A;
    Matrix B;
    Matrix C_p;
    Matrix D_p;
    Matrix C_r;
    Matrix D_r;
    Vector delta;  ///< uncertainty realization this system was built for

    [[nodiscard]] Eigen::Index n() const { return A.rows(); }
    [[nodiscard]] Eigen::Index n_a() const { return B.cols(); }
    [[nodiscard]] Eigen::Index n_p() const { return C_p.rows(); }
    [[nodiscard]] Eigen::Index n_r() const { return C_r.rows(); }

    [[nodiscard]] StateSpace performance() const { return {A, B, C_p, D_p}; }
    [[nodiscard]] StateSpace residual() const { return {A, B, C_r, D_r}; }

    void validate() const;
};

/// Build the closed loop for an already perturbed plant.
ClosedLoopSystem assemble_closed_loop(const PlantModel& plant, const ControllerModel& ctrl,
                                      const DetectorModel& det, const AttackSelection& atk,
                                      const Vector& delta = Vector());

inline ClosedLoopSystem assemble_closed_loop(const SystemModel& model, const Vector& delta = Vector()) {
    return assemble_closed_loop(model.plant, model.controller, model.detector, model.attack, delta);
}

enum class OutputChannel { performance, residual };

/// G(z) = C (zI - A)^{-1} B + D. Throws DomainError when z is within
/// `pole_tol` (relative) of an eigenvalue of A.
CMatrix transfer_eval(const StateSpace& ss, std::complex<double> z, double pole_tol = 1e-10);
CMatrix transfer_eval(const ClosedLoopSystem& sys, std::complex<double> z, OutputChannel output,
                      double pole_tol = 1e-10);

struct SimulationResult {
    Matrix y_p;    ///< n_p x (N+1), column k is y_p[k]
    Matrix y_r;    ///< n_r x (N+1)
    Matrix x;      ///< n x (N+2), column k is x[k]; x[0] = 0
    double performance_energy = 0.0;  ///< sum_{k=0}^{N} |y_p[k]|^2
    double residual_energy = 0.0;
    double terminal_norm = 0.0;       ///< |x[N+1]|
    bool diverging = false;           ///< state kept growing after the attack stopped
};

/**
 * @brief Forward recursion from x[0] = 0.
 *
 * `attack` is n_a x L with column k holding a[k]; a[k] = 0 for k >= L.
 * Outputs are recorded on [0, horizon]; requires horizon >= L - 1.
 */
SimulationResult simulate(const ClosedLoopSystem& sys, const Matrix& attack, Eigen::Index horizon);

struct AssumptionReport {
    bool schur_stable = false;
    double spectral_radius = 0.0;
    bool b_cl_full_rank = false;
    Eigen::Index b_cl_rank = 0;
};

AssumptionReport check_assumptions(const ClosedLoopSystem& sys, double rank_tol = 1e-10);

double spectral_radius(const Matrix& A);

}  // namespace oogrisk

#endif  // OOGRISK_MODEL_HPP
