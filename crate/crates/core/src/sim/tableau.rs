//! Aaronson–Gottesman stabilizer tableau for Clifford circuits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::statevector::sampled_qubits;
use super::{MeasurementHistogram, SimError};
use crate::circuit::{Circuit, GateKind};

/// `2n + 1` rows (destabilizers, stabilizers, scratch) of packed X/Z bits plus a sign bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerTableau {
    n: usize,
    words: usize,
    x: Vec<u64>,
    z: Vec<u64>,
    r: Vec<bool>,
}

impl StabilizerTableau {
    /// Tableau of `|0…0⟩`.
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        let rows = 2 * n + 1;
        let mut t = Self { n, words, x: vec![0; rows * words], z: vec![0; rows * words], r: vec![false; rows] };
        for q in 0..n {
            t.set_x(q, q, true);
            t.set_z(n + q, q, true);
        }
        t
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    fn bit(v: &[u64], words: usize, row: usize, q: usize) -> bool {
        v[row * words + q / 64] >> (q % 64) & 1 == 1
    }

    fn xb(&self, row: usize, q: usize) -> bool {
        Self::bit(&self.x, self.words, row, q)
    }

    fn zb(&self, row: usize, q: usize) -> bool {
        Self::bit(&self.z, self.words, row, q)
    }

    fn set_x(&mut self, row: usize, q: usize, v: bool) {
        let w = &mut self.x[row * self.words + q / 64];
        *w = (*w & !(1 << (q % 64))) | (u64::from(v) << (q % 64));
    }

    fn set_z(&mut self, row: usize, q: usize, v: bool) {
        let w = &mut self.z[row * self.words + q / 64];
        *w = (*w & !(1 << (q % 64))) | (u64::from(v) << (q % 64));
    }

    fn rows(&self) -> usize {
        2 * self.n
    }

    pub fn h(&mut self, a: usize) {
        for i in 0..self.rows() {
            let (x, z) = (self.xb(i, a), self.zb(i, a));
            self.r[i] ^= x & z;
            self.set_x(i, a, z);
            self.set_z(i, a, x);
        }
    }

    pub fn s(&mut self, a: usize) {
        for i in 0..self.rows() {
            let (x, z) = (self.xb(i, a), self.zb(i, a));
            self.r[i] ^= x & z;
            self.set_z(i, a, z ^ x);
        }
    }

    pub fn x(&mut self, a: usize) {
        for i in 0..self.rows() {
            self.r[i] ^= self.zb(i, a);
        }
    }

    pub fn z(&mut self, a: usize) {
        for i in 0..self.rows() {
            self.r[i] ^= self.xb(i, a);
        }
    }

    pub fn y(&mut self, a: usize) {
        for i in 0..self.rows() {
            self.r[i] ^= self.xb(i, a) ^ self.zb(i, a);
        }
    }

    pub fn cx(&mut self, a: usize, b: usize) {
        for i in 0..self.rows() {
            let (xa, za, xb, zb) = (self.xb(i, a), self.zb(i, a), self.xb(i, b), self.zb(i, b));
            self.r[i] ^= xa & zb & !(xb ^ za);
            self.set_x(i, b, xb ^ xa);
            self.set_z(i, a, za ^ zb);
        }
    }

    /// Applies one Clifford gate; `position` is only used for the error.
    pub fn apply(&mut self, kind: GateKind, qubits: &[usize], position: usize) -> Result<(), SimError> {
        match (kind, qubits) {
            (GateKind::H, &[a]) => self.h(a),
            (GateKind::S, &[a]) => self.s(a),
            (GateKind::Sdg, &[a]) => {
                self.s(a);
                self.z(a);
            }
            (GateKind::X, &[a]) => self.x(a),
            (GateKind::Y, &[a]) => self.y(a),
            (GateKind::Z, &[a]) => self.z(a),
            (GateKind::Cx, &[a, b]) => self.cx(a, b),
            (GateKind::Cz, &[a, b]) => {
                self.h(b);
                self.cx(a, b);
                self.h(b);
            }
            (GateKind::Swap, &[a, b]) => {
                self.cx(a, b);
                self.cx(b, a);
                self.cx(a, b);
            }
            _ => return Err(SimError::NonCliffordGate { gate: kind.name().to_string(), position }),
        }
        Ok(())
    }

    fn g(x1: bool, z1: bool, x2: bool, z2: bool) -> i32 {
        match (x1, z1) {
            (false, false) => 0,
            (true, true) => i32::from(z2) - i32::from(x2),
            (true, false) => i32::from(z2) * (2 * i32::from(x2) - 1),
            (false, true) => i32::from(x2) * (1 - 2 * i32::from(z2)),
        }
    }

    /// Row `h` ← row `i` · row `h`, tracking the sign.
    fn rowsum(&mut self, h: usize, i: usize) {
        let mut sum = 2 * i32::from(self.r[h]) + 2 * i32::from(self.r[i]);
        for q in 0..self.n {
            sum += Self::g(self.xb(i, q), self.zb(i, q), self.xb(h, q), self.zb(h, q));
        }
        self.r[h] = sum.rem_euclid(4) == 2;
        let w = self.words;
        for k in 0..w {
            self.x[h * w + k] ^= self.x[i * w + k];
            self.z[h * w + k] ^= self.z[i * w + k];
        }
    }

    fn copy_row(&mut self, dst: usize, src: usize) {
        let w = self.words;
        self.x.copy_within(src * w..(src + 1) * w, dst * w);
        self.z.copy_within(src * w..(src + 1) * w, dst * w);
        self.r[dst] = self.r[src];
    }

    fn clear_row(&mut self, row: usize) {
        let w = self.words;
        self.x[row * w..(row + 1) * w].fill(0);
        self.z[row * w..(row + 1) * w].fill(0);
        self.r[row] = false;
    }

    /// Computational-basis measurement of qubit `a`, collapsing the state.
    pub fn measure<R: Rng + ?Sized>(&mut self, a: usize, rng: &mut R) -> bool {
        let n = self.n;
        if let Some(p) = (n..2 * n).find(|&p| self.xb(p, a)) {
            for i in 0..2 * n {
                if i != p && self.xb(i, a) {
                    self.rowsum(i, p);
                }
            }
            self.copy_row(p - n, p);
            self.clear_row(p);
            self.set_z(p, a, true);
            let outcome = rng.random::<bool>();
            self.r[p] = outcome;
            outcome
        } else {
            let scratch = 2 * n;
            self.clear_row(scratch);
            for i in 0..n {
                if self.xb(i, a) {
                    self.rowsum(scratch, i + n);
                }
            }
            self.r[scratch]
        }
    }
}

/// Samples a Clifford circuit; fails on the first non-Clifford gate.
pub fn tableau_run(c: &Circuit, shots: u64, seed: u64) -> Result<MeasurementHistogram, SimError> {
    let mut t = StabilizerTableau::new(c.n_qubits);
    for (pos, g) in c.unitary_gates().iter().enumerate() {
        t.apply(g.kind, &g.qubits, pos)?;
    }
    let measured = sampled_qubits(c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hist = MeasurementHistogram::default();
    for _ in 0..shots {
        let mut shot = t.clone();
        let mut bits = vec!['0'; measured.len()];
        for (k, &q) in measured.iter().enumerate() {
            if shot.measure(q, &mut rng) {
                bits[measured.len() - 1 - k] = '1';
            }
        }
        hist.record(bits.into_iter().collect());
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    #[test]
    fn bell_pair_is_correlated() {
        let c = parse_circuit("qubits 2\nh 0\ncx 0 1\nmeasure 0\nmeasure 1\n").unwrap();
        let h = tableau_run(&c, 2000, 5).unwrap();
        assert_eq!(h.counts.keys().cloned().collect::<Vec<_>>(), vec!["00".to_string(), "11".to_string()]);
        assert!(h.counts["00"] > 800 && h.counts["11"] > 800);
    }

    #[test]
    fn deterministic_outcomes() {
        let c = parse_circuit("qubits 3\nx 0\nh 1\nz 1\nh 1\nsdg 2\ns 2\nswap 0 2\n").unwrap();
        let h = tableau_run(&c, 50, 0).unwrap();
        assert_eq!(h.counts["110"], 50);
    }

    #[test]
    fn non_clifford_names_gate_and_position() {
        let c = parse_circuit("qubits 1\nh 0\nt 0\n").unwrap();
        assert_eq!(tableau_run(&c, 1, 0).unwrap_err(), SimError::NonCliffordGate { gate: "t".into(), position: 1 });
    }

    #[test]
    fn agrees_with_state_vector_on_random_clifford_circuits() {
        use crate::circuit::random_clifford_circuit;
        use crate::sim::sv_run;
        for seed in 0..10 {
            let c = random_clifford_circuit(4, 30, seed);
            let a = tableau_run(&c, 20_000, seed).unwrap();
            let b = sv_run(&c, 20_000, seed + 100).unwrap();
            assert!(a.tv_distance(&b) < 0.03, "seed {seed}: {}", a.tv_distance(&b));
        }
    }

    #[test]
    fn wide_register_uses_multiple_words() {
        let mut text = String::from("qubits 70\n");
        text.push_str("x 65\nh 3\ncx 3 68\n");
        let c = parse_circuit(&text).unwrap();
        let h = tableau_run(&c, 100, 2).unwrap();
        for k in h.counts.keys() {
            let b: Vec<char> = k.chars().rev().collect();
            assert_eq!(b[65], '1');
            assert_eq!(b[3], b[68]);
        }
    }
}
