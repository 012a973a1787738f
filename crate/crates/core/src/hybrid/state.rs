use nalgebra::ComplexField;
use serde::{Deserialize, Serialize};

use super::mode::{gaussian_fock_coefficients, hermite_functions};
use super::streaming::Mode;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::scalar::{cr, Real, C};

/// Largest norm fraction an encoding may lose to the Fock truncation.
const LEAKAGE_LIMIT: f64 = 1e-6;
/// Narrowest wavepacket accepted by [`HybridState::encode`].
const MIN_WIDTH: f64 = 0.5;

/// Real Gaussian wavepacket `∝ exp(-((x-x₀)² + (y-y₀)²) / (4σ²))` in the
/// position quadratures of the two modes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianPacket {
    pub x0: f64,
    pub y0: f64,
    pub sigma: f64,
}

impl GaussianPacket {
    pub fn vacuum() -> Self {
        Self {
            x0: 0.0,
            y0: 0.0,
            sigma: std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

/// Which tensor factors an operator acts on, inferred from its dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// The two pseudospins (dimension 4).
    Spin,
    /// Pseudospins and one mode (dimension `4 N`).
    SpinMode(Mode),
    /// Pseudospins and both modes (dimension `4 N²`).
    Full,
}

impl Support {
    /// Spin-mode operators are taken to act on mode y, where the shear flow
    /// couples.
    pub fn for_dimension(dim: usize, cutoff: usize) -> Result<Self> {
        if dim == 4 {
            Ok(Support::Spin)
        } else if dim == 4 * cutoff {
            Ok(Support::SpinMode(Mode::Y))
        } else if dim == 4 * cutoff * cutoff {
            Ok(Support::Full)
        } else {
            Err(Error::DimensionMismatch { op: dim, cutoff })
        }
    }
}

/// Per-component diagnostics in the position representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentMoments {
    /// `ledger · ∫∫ ⟨x, y|Ψ_i⟩ dx dy`, the physical mass of the component.
    pub mass: f64,
    /// `ledger² ‖Ψ_i‖²`.
    pub weight: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    /// `⟨x̂²⟩ - ⟨x̂⟩²` within the component.
    pub var_x: f64,
    pub var_y: f64,
}

/// Square evaluation grid `[min, max]²` with `points` nodes per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl FieldGrid {
    pub fn nodes(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(|k| self.min + k as f64 * h).collect()
    }

    pub fn spacing(&self) -> f64 {
        if self.points < 2 {
            0.0
        } else {
            (self.max - self.min) / (self.points - 1) as f64
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample {
    pub component: usize,
    pub x1: f64,
    pub x2: f64,
    pub f: f64,
}

/// Field values on a grid and the largest imaginary part discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldExtraction {
    pub samples: Vec<FieldSample>,
    pub max_imag: f64,
}

/// Normalized amplitudes over spin ⊗ Fock(N) ⊗ Fock(N) with the physical
/// normalization carried separately in `ledger`.
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState<T: Real> {
    cutoff: usize,
    amplitudes: CVector<T>,
    ledger: T,
    eta: [T; 4],
}

/// `∫ ψ_n(x) dx`: zero for odd `n`, `√((n-1)/n)` recursion for even `n`.
pub(crate) fn hermite_integrals(levels: usize) -> Vec<f64> {
    let mut out = vec![0.0; levels];
    if levels > 0 {
        out[0] = std::f64::consts::SQRT_2 * std::f64::consts::PI.powf(0.25);
    }
    for n in (2..levels).step_by(2) {
        out[n] = out[n - 2] * ((n - 1) as f64 / n as f64).sqrt();
    }
    out
}

fn encoding_leakage(packet: &GaussianPacket, cutoff: usize) -> f64 {
    let (_, tx) = gaussian_fock_coefficients(packet.x0, packet.sigma, cutoff);
    let (_, ty) = gaussian_fock_coefficients(packet.y0, packet.sigma, cutoff);
    1.0 - (1.0 - tx) * (1.0 - ty)
}

fn required_cutoff(packet: &GaussianPacket, cutoff: usize) -> usize {
    let mut n = cutoff.max(2);
    while n < 4096 {
        n += (n / 4).max(1);
        if encoding_leakage(packet, n) <= LEAKAGE_LIMIT {
            return n;
        }
    }
    n
}

impl<T: Real> HybridState<T> {
    /// Encodes `Σ_i η_i |i⟩ ⊗ |Ψ_i⟩` with one Gaussian packet shared by all
    /// components or one per component. The ledger starts at the physical
    /// norm so that `ledger · amplitudes` reproduces the encoded field.
    pub fn encode(eta: [f64; 4], packets: &[GaussianPacket], cutoff: usize) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::InvalidParameter {
                name: "cutoff",
                reason: format!("need at least 2 Fock levels, got {cutoff}"),
            });
        }
        if eta.iter().any(|e| !e.is_finite()) || eta.iter().all(|&e| e == 0.0) {
            return Err(Error::InvalidParameter {
                name: "eta",
                reason: "weights must be finite and not all zero".into(),
            });
        }
        if packets.len() != 1 && packets.len() != 4 {
            return Err(Error::InvalidParameter {
                name: "packets",
                reason: format!("expected 1 or 4 packets, got {}", packets.len()),
            });
        }
        let n = cutoff;
        let mut amplitudes = CVector::<T>::zeros(4 * n * n);
        for (s, &e) in eta.iter().enumerate() {
            let packet = packets[if packets.len() == 1 { 0 } else { s }];
            if !(packet.sigma >= MIN_WIDTH) || !packet.x0.is_finite() || !packet.y0.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "sigma",
                    reason: format!(
                        "packet widths must be at least {MIN_WIDTH}, got {}",
                        packet.sigma
                    ),
                });
            }
            if e == 0.0 {
                continue;
            }
            let leaked = encoding_leakage(&packet, n);
            if leaked > LEAKAGE_LIMIT {
                return Err(Error::CutoffLeakage {
                    leaked,
                    limit: LEAKAGE_LIMIT,
                    required: required_cutoff(&packet, n),
                });
            }
            let (cx, _) = gaussian_fock_coefficients(packet.x0, packet.sigma, n);
            let (cy, _) = gaussian_fock_coefficients(packet.y0, packet.sigma, n);
            for (i, a) in cx.iter().enumerate() {
                for (j, b) in cy.iter().enumerate() {
                    amplitudes[(s * n + i) * n + j] = cr(T::lit(e * a * b));
                }
            }
        }
        let norm = amplitudes.norm();
        amplitudes /= cr(norm);
        Ok(Self {
            cutoff,
            amplitudes,
            ledger: norm,
            eta: eta.map(T::lit),
        })
    }

    /// Wraps raw amplitudes; they are normalized and the ledger absorbs the
    /// norm.
    pub fn from_amplitudes(cutoff: usize, amplitudes: CVector<T>, eta: [T; 4]) -> Result<Self> {
        if amplitudes.len() != 4 * cutoff * cutoff {
            return Err(Error::DimensionMismatch {
                op: amplitudes.len(),
                cutoff,
            });
        }
        let norm = amplitudes.norm();
        if norm == T::zero() {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                reason: "zero vector".into(),
            });
        }
        Ok(Self {
            cutoff,
            amplitudes: amplitudes / cr(norm),
            ledger: norm,
            eta,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn amplitudes(&self) -> &CVector<T> {
        &self.amplitudes
    }

    pub fn ledger(&self) -> T {
        self.ledger
    }

    pub fn eta(&self) -> [T; 4] {
        self.eta
    }

    pub fn norm(&self) -> T {
        self.amplitudes.norm()
    }

    pub(crate) fn index(&self, s: usize, nx: usize, ny: usize) -> usize {
        (s * self.cutoff + nx) * self.cutoff + ny
    }

    pub fn amplitude(&self, s: usize, nx: usize, ny: usize) -> C<T> {
        self.amplitudes[self.index(s, nx, ny)]
    }

    /// Replaces the amplitudes and scales the ledger by `factor`; the new
    /// amplitudes are renormalized.
    pub(crate) fn replace(&mut self, amplitudes: CVector<T>, factor: T) {
        let norm = amplitudes.norm();
        self.amplitudes = amplitudes / cr(norm);
        self.ledger *= factor;
    }

    /// Applies a 4×4 spin operator.
    pub fn apply_spin(&mut self, op: &CMatrix<T>) -> Result<()> {
        let n2 = self.cutoff * self.cutoff;
        if op.shape() != (4, 4) {
            return Err(Error::DimensionMismatch {
                op: op.nrows(),
                cutoff: self.cutoff,
            });
        }
        let mut out = CVector::<T>::zeros(self.amplitudes.len());
        for k in 0..n2 {
            for r in 0..4 {
                let mut acc = cr(T::zero());
                for s in 0..4 {
                    acc += op[(r, s)] * self.amplitudes[s * n2 + k];
                }
                out[r * n2 + k] = acc;
            }
        }
        self.amplitudes = out;
        Ok(())
    }

    /// Applies an operator on spin ⊗ `mode` (dimension `4 N`), acting as the
    /// identity on the other mode.
    pub fn apply_spin_mode(&mut self, mode: Mode, op: &CMatrix<T>) -> Result<()> {
        let n = self.cutoff;
        if op.shape() != (4 * n, 4 * n) {
            return Err(Error::DimensionMismatch {
                op: op.nrows(),
                cutoff: n,
            });
        }
        // The active composite index is (s, n_b); the spectator is the other
        // mode's level.
        let position = |active: usize, spectator: usize| {
            let (s, level) = (active / n, active % n);
            match mode {
                Mode::X => (s * n + level) * n + spectator,
                Mode::Y => (s * n + spectator) * n + level,
            }
        };
        let mut out = CVector::<T>::zeros(self.amplitudes.len());
        let mut column = CVector::<T>::zeros(4 * n);
        for spectator in 0..n {
            for a in 0..4 * n {
                column[a] = self.amplitudes[position(a, spectator)];
            }
            let image = op * &column;
            for a in 0..4 * n {
                out[position(a, spectator)] = image[a];
            }
        }
        self.amplitudes = out;
        Ok(())
    }

    pub fn apply_full(&mut self, op: &CMatrix<T>) -> Result<()> {
        let dim = self.amplitudes.len();
        if op.shape() != (dim, dim) {
            return Err(Error::DimensionMismatch {
                op: op.nrows(),
                cutoff: self.cutoff,
            });
        }
        self.amplitudes = op * &self.amplitudes;
        Ok(())
    }

    pub fn apply(&mut self, op: &CMatrix<T>, support: Support) -> Result<()> {
        match support {
            Support::Spin => self.apply_spin(op),
            Support::SpinMode(mode) => self.apply_spin_mode(mode, op),
            Support::Full => self.apply_full(op),
        }
    }

    /// Norm fraction on Fock levels `≥ N - 2` of either mode.
    pub fn leakage(&self) -> T {
        let n = self.cutoff;
        let edge = n.saturating_sub(2);
        let mut leaked = T::zero();
        for s in 0..4 {
            for i in 0..n {
                for j in 0..n {
                    if i >= edge || j >= edge {
                        leaked += self.amplitude(s, i, j).modulus_squared();
                    }
                }
            }
        }
        leaked / self.amplitudes.norm_squared()
    }

    /// `⟨m|Ψ_s⟩`-style component slice as a row-major `N × N` block.
    fn block(&self, s: usize) -> &[C<T>] {
        let n2 = self.cutoff * self.cutoff;
        &self.amplitudes.as_slice()[s * n2..(s + 1) * n2]
    }

    pub fn component_moments(&self) -> [ComponentMoments; 4] {
        let n = self.cutoff;
        let ledger = self.ledger.as_f64();
        let integrals = hermite_integrals(n);
        let half_sqrt = std::f64::consts::FRAC_1_SQRT_2;
        std::array::from_fn(|s| {
            let block: Vec<(f64, f64)> = self
                .block(s)
                .iter()
                .map(|z| (z.re.as_f64(), z.im.as_f64()))
                .collect();
            let at = |i: usize, j: usize| block[i * n + j];
            let mut mass = 0.0;
            let mut weight = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let (re, im) = at(i, j);
                    mass += re * integrals[i] * integrals[j];
                    weight += re * re + im * im;
                }
            }
            // x̂|n⟩ = (√n |n-1⟩ + √(n+1) |n+1⟩)/√2, applied along one mode.
            let quadrature = |along_x: bool| {
                let (mut first, mut second) = (0.0, 0.0);
                for i in 0..n {
                    for j in 0..n {
                        let (k, fixed) = if along_x { (i, j) } else { (j, i) };
                        let get = |level: usize| {
                            if along_x {
                                at(level, fixed)
                            } else {
                                at(fixed, level)
                            }
                        };
                        let (mut xr, mut xi) = (0.0, 0.0);
                        if k > 0 {
                            let (r, m) = get(k - 1);
                            let w = (k as f64).sqrt() * half_sqrt;
                            xr += w * r;
                            xi += w * m;
                        }
                        if k + 1 < n {
                            let (r, m) = get(k + 1);
                            let w = ((k + 1) as f64).sqrt() * half_sqrt;
                            xr += w * r;
                            xi += w * m;
                        }
                        let (r, m) = get(k);
                        first += r * xr + m * xi;
                        second += xr * xr + xi * xi;
                    }
                }
                (first, second)
            };
            let (sx, qx) = quadrature(true);
            let (sy, qy) = quadrature(false);
            let (mean_x, mean_y, var_x, var_y) = if weight > 0.0 {
                let (mx, my) = (sx / weight, sy / weight);
                (mx, my, qx / weight - mx * mx, qy / weight - my * my)
            } else {
                (0.0, 0.0, 0.0, 0.0)
            };
            ComponentMoments {
                mass: ledger * mass,
                weight: ledger * ledger * weight,
                mean_x,
                mean_y,
                var_x,
                var_y,
            }
        })
    }

    /// Half-width of the region where truncated Hermite sums are trusted.
    pub fn field_limit(&self) -> f64 {
        (2.0 * self.cutoff as f64).sqrt() - 1.0
    }

    /// `ledger · ⟨x₁, x₂|Ψ_i⟩` for every component on the grid.
    pub fn extract_field(&self, grid: &FieldGrid) -> Result<FieldExtraction> {
        let limit = self.field_limit();
        if grid.points == 0 || !(grid.min <= grid.max) || grid.min < -limit || grid.max > limit {
            return Err(Error::GridOutOfRange {
                min: grid.min,
                max: grid.max,
                limit,
            });
        }
        let n = self.cutoff;
        let nodes = grid.nodes();
        let table: Vec<Vec<f64>> = nodes.iter().map(|&x| hermite_functions(x, n)).collect();
        let ledger = self.ledger.as_f64();
        let mut samples = Vec::with_capacity(4 * nodes.len() * nodes.len());
        let mut max_imag: f64 = 0.0;
        for s in 0..4 {
            let block = self.block(s);
            // partial[q][i] = Σ_j Ψ_{ij} ψ_j(x₂[q])
            let partial: Vec<Vec<(f64, f64)>> = table
                .iter()
                .map(|psi_y| {
                    (0..n)
                        .map(|i| {
                            (0..n).fold((0.0, 0.0), |(re, im), j| {
                                let z = block[i * n + j];
                                (re + z.re.as_f64() * psi_y[j], im + z.im.as_f64() * psi_y[j])
                            })
                        })
                        .collect()
                })
                .collect();
            for (p, psi_x) in table.iter().enumerate() {
                for (q, row) in partial.iter().enumerate() {
                    let (re, im) = row
                        .iter()
                        .zip(psi_x)
                        .fold((0.0, 0.0), |(a, b), (&(r, m), &h)| (a + r * h, b + m * h));
                    max_imag = max_imag.max((ledger * im).abs());
                    samples.push(FieldSample {
                        component: s,
                        x1: nodes[p],
                        x2: nodes[q],
                        f: ledger * re,
                    });
                }
            }
        }
        Ok(FieldExtraction { samples, max_imag })
    }

    /// `(component, n_x, n_y, re, im)` rows of the amplitude tensor scaled by
    /// the ledger.
    pub fn amplitude_rows(&self) -> Vec<(usize, usize, usize, f64, f64)> {
        let n = self.cutoff;
        let ledger = self.ledger.as_f64();
        let mut rows = Vec::with_capacity(self.amplitudes.len());
        for s in 0..4 {
            for i in 0..n {
                for j in 0..n {
                    let z = self.amplitude(s, i, j);
                    rows.push((s, i, j, ledger * z.re.as_f64(), ledger * z.im.as_f64()));
                }
            }
        }
        rows
    }
}
