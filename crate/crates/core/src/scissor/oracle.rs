use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use super::{check_input, output_state, ScissorConfig};
use crate::channels::Heralded;
use crate::error::{invalid, Error, Result};
use crate::fock::special::beam_splitter_amplitude;
use crate::fock::Ket;

/// Sparse multimode state: occupation numbers → amplitude.
type Register = BTreeMap<Vec<u8>, C64>;

const MAX_ARMS: usize = 3;

/// Simulates the scissor network mode by mode.
///
/// Modes are `s_j` (split input), `b_j` (ancilla photon, then arm output) and
/// `c_j` (vacuum ancilla), `j < N`. Each arm sends its ancilla photon through a
/// splitter of reflectivity `η` (`b_j → c_j`), mixes `s_j` and `c_j` on a 50:50
/// splitter and heralds on `(s_j, c_j) = (0, 1)`. The arm outputs are
/// recombined by the inverse of the input splitter and all but `b_0` are
/// projected onto vacuum.
///
/// `success_probability` is that of the single heralding pattern used here,
/// i.e. `scissor_amplify`'s value divided by [`ScissorConfig::pattern_multiplicity`].
pub fn circuit_oracle(psi: &Ket, cfg: &ScissorConfig) -> Result<Heralded> {
    check_input(psi, cfg)?;
    let n = cfg.arms();
    if n > MAX_ARMS {
        return Err(invalid(format!(
            "circuit oracle supports at most {MAX_ARMS} arms, got {n}"
        )));
    }
    let dim = cfg.spec().dim();
    if dim > u8::MAX as usize {
        return Err(Error::DimensionMismatch {
            expected: u8::MAX as usize,
            found: dim,
        });
    }
    let s = |j: usize| j;
    let b = |j: usize| n + 2 * j;
    let c = |j: usize| n + 2 * j + 1;

    let mut reg = Register::new();
    for (k, amp) in psi.amplitudes().iter().enumerate() {
        if amp.norm_sqr() > 0.0 {
            let mut occ = vec![0u8; 3 * n];
            occ[s(0)] = k as u8;
            for j in 0..n {
                occ[b(j)] = 1;
            }
            reg.insert(occ, *amp);
        }
    }

    // balanced splitter: arm k keeps 1/(N − k) of what reaches it
    for k in 0..n - 1 {
        let tr = 1.0 / (n - k) as f64;
        reg = beam_splitter(&reg, s(k), s(k + 1), tr.sqrt(), (1.0 - tr).sqrt());
    }

    let eta = cfg.eta();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..n {
        reg = beam_splitter(&reg, b(j), c(j), (1.0 - eta).sqrt(), eta.sqrt());
        reg = beam_splitter(&reg, s(j), c(j), half, half);
        reg.retain(|occ, _| occ[s(j)] == 0 && occ[c(j)] == 1);
    }

    for k in (0..n - 1).rev() {
        let tr = 1.0 / (n - k) as f64;
        reg = beam_splitter(&reg, b(k), b(k + 1), tr.sqrt(), -(1.0 - tr).sqrt());
    }

    let mut out = vec![C64::new(0.0, 0.0); dim];
    for (occ, amp) in reg {
        if (1..n).all(|j| occ[b(j)] == 0) {
            let k = occ[b(0)] as usize;
            if k >= dim {
                return Err(Error::Truncation {
                    dim,
                    leaked: amp.norm_sqr(),
                    tolerance: cfg.spec().trunc_tol(),
                });
            }
            out[k] += amp;
        }
    }
    output_state(out, cfg.spec())
}

fn beam_splitter(reg: &Register, p: usize, q: usize, t: f64, r: f64) -> Register {
    let mut out = Register::new();
    for (occ, amp) in reg {
        let (n1, n2) = (occ[p] as usize, occ[q] as usize);
        for m1 in 0..=n1 + n2 {
            let u = beam_splitter_amplitude(t, r, n1, n2, m1);
            if u == 0.0 {
                continue;
            }
            let mut next = occ.clone();
            next[p] = m1 as u8;
            next[q] = (n1 + n2 - m1) as u8;
            *out.entry(next).or_insert(C64::new(0.0, 0.0)) += amp * u;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::scissor_amplify;
    use super::*;
    use crate::fock::HilbertSpec;
    use approx::assert_abs_diff_eq;

    fn spec(dim: usize) -> HilbertSpec {
        HilbertSpec::new(dim).unwrap()
    }

    fn assert_matches_filter(psi: &Ket, cfg: &ScissorConfig) {
        let circuit = circuit_oracle(psi, cfg).unwrap();
        let closed = scissor_amplify(psi, cfg).unwrap();
        let diff = (circuit.state.matrix() - closed.state.matrix()).camax();
        assert!(diff < 1e-8, "N={} g={}: {diff:e}", cfg.arms(), cfg.gain());
        assert_abs_diff_eq!(
            circuit.success_probability * cfg.pattern_multiplicity(),
            closed.success_probability,
            epsilon = 1e-12
        );
    }

    #[test]
    fn agrees_with_closed_form_filter() {
        let s = spec(20);
        for arms in 1..=3 {
            for g in [0.6, 1.0, 1.5501, 2.3] {
                let cfg = ScissorConfig::new(arms, g, s).unwrap();
                for alpha in [C64::new(0.2, 0.0), C64::new(0.7, -0.4)] {
                    assert_matches_filter(&Ket::coherent(alpha, s).unwrap(), &cfg);
                }
            }
        }
    }

    #[test]
    fn vacuum_input() {
        let s = spec(6);
        let cfg = ScissorConfig::new(1, 2.0, s).unwrap();
        let h = circuit_oracle(&Ket::fock(0, s).unwrap(), &cfg).unwrap();
        assert_abs_diff_eq!(h.state.matrix()[(0, 0)].re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(h.success_probability, 1.0 / (2.0 * 5.0), epsilon = 1e-14);
    }

    #[test]
    fn unit_gain_single_scissor_keeps_qubit_states() {
        let s = spec(6);
        let cfg = ScissorConfig::new(1, 1.0, s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::new(0.0, 0.0); 6];
        amps[0] = C64::new(h, 0.0);
        amps[1] = C64::new(h, 0.0);
        let psi = Ket::new(amps.into(), s).unwrap();
        let out = circuit_oracle(&psi, &cfg).unwrap();
        assert!((out.state.matrix() - psi.projector().matrix()).camax() < 1e-14);
    }

    #[test]
    fn two_photons_through_two_arms() {
        let s = spec(6);
        let g = 1.3;
        let cfg = ScissorConfig::new(2, g, s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::new(0.0, 0.0); 6];
        amps[0] = C64::new(h, 0.0);
        amps[2] = C64::new(h, 0.0);
        let out = circuit_oracle(&Ket::new(amps.into(), s).unwrap(), &cfg).unwrap();
        // relative amplitude of |2⟩ is g²/2
        let ratio = out.state.matrix()[(2, 2)].re / out.state.matrix()[(0, 0)].re;
        assert_abs_diff_eq!(ratio, (g * g / 2.0).powi(2), epsilon = 1e-12);
    }

    #[test]
    fn refuses_large_networks() {
        let s = spec(6);
        let cfg = ScissorConfig::new(4, 1.0, s).unwrap();
        assert!(circuit_oracle(&Ket::fock(0, s).unwrap(), &cfg).is_err());
    }
}
