//! Rate 1/n feedforward convolutional codes and their trellis.
//!
//! State convention: for a code with memory `M = K - 1`, the state at trellis
//! position `i` is the register contents `(u[i-1], ..., u[i-M])`, with the
//! newest input bit in the most significant position. Generator polynomials
//! are given in the usual octal form; the generator's MSB (bit `K - 1`)
//! multiplies the current input bit, so octal `7` is `u[i] ^ u[i-1] ^ u[i-2]`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported constraint length. Keeps state indices well inside `u32`
/// and trellis tables small enough to build eagerly.
pub const MAX_CONSTRAINT_LENGTH: usize = 16;

/// A binary-input rate `1/n_out` feedforward convolutional code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    constraint_length: usize,
    generators: Vec<u32>,
}

impl CodeSpec {
    pub fn new(generators: Vec<u32>, constraint_length: usize) -> Result<Self> {
        if !(2..=MAX_CONSTRAINT_LENGTH).contains(&constraint_length) {
            return Err(Error::Config(format!(
                "constraint length {constraint_length} outside 2..={MAX_CONSTRAINT_LENGTH}"
            )));
        }
        if generators.is_empty() {
            return Err(Error::Config("at least one generator is required".into()));
        }
        for &g in &generators {
            if g == 0 {
                return Err(Error::Config("zero generator polynomial".into()));
            }
            if g >> constraint_length != 0 {
                return Err(Error::Config(format!(
                    "generator {g:o} has degree >= constraint length {constraint_length}"
                )));
            }
        }
        Ok(Self {
            constraint_length,
            generators,
        })
    }

    /// Parses comma-separated octal generators such as `"171,133,165"`.
    ///
    /// When `constraint_length` is `None` it is taken from the widest generator.
    pub fn from_octal(text: &str, constraint_length: Option<usize>) -> Result<Self> {
        let generators = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                u32::from_str_radix(s, 8)
                    .map_err(|e| Error::Config(format!("bad octal generator {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let widest = generators
            .iter()
            .map(|g| (u32::BITS - g.leading_zeros()) as usize)
            .max()
            .unwrap_or(0);
        Self::new(generators, constraint_length.unwrap_or(widest))
    }

    /// Number of coded bits per info bit.
    pub fn n_out(&self) -> usize {
        self.generators.len()
    }

    pub fn constraint_length(&self) -> usize {
        self.constraint_length
    }

    /// Encoder memory `K - 1`.
    pub fn memory(&self) -> usize {
        self.constraint_length - 1
    }

    pub fn num_states(&self) -> usize {
        1 << self.memory()
    }

    pub fn rate(&self) -> f64 {
        1.0 / self.n_out() as f64
    }

    pub fn generators(&self) -> &[u32] {
        &self.generators
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| format!("{g:o}")).collect();
        write!(f, "K={} ({})", self.constraint_length, gens.join(","))
    }
}

/// Unrolled state-transition structure of a [`CodeSpec`].
///
/// Output words pack coded bit `c` (the output of generator `c`) at bit
/// position `c`.
#[derive(Debug, Clone)]
pub struct Trellis {
    spec: CodeSpec,
    next: Vec<u32>,
    outputs: Vec<u32>,
    butterflies: Vec<[u32; 4]>,
}

impl Trellis {
    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn num_states(&self) -> usize {
        self.spec.num_states()
    }

    pub fn n_out(&self) -> usize {
        self.spec.n_out()
    }

    pub fn memory(&self) -> usize {
        self.spec.memory()
    }

    /// Number of distinct output words, `2^n_out`.
    pub fn num_words(&self) -> usize {
        1 << self.n_out()
    }

    pub fn next_state(&self, state: usize, bit: u8) -> usize {
        self.next[2 * state + bit as usize] as usize
    }

    /// Packed output word for the edge leaving `state` on input `bit`.
    pub fn output_word(&self, state: usize, bit: u8) -> u32 {
        self.outputs[2 * state + bit as usize]
    }

    /// Output bits of the edge leaving `state` on input `bit`, in generator order.
    pub fn output_bits(&self, state: usize, bit: u8) -> Vec<u8> {
        let word = self.output_word(state, bit);
        (0..self.n_out()).map(|c| ((word >> c) & 1) as u8).collect()
    }

    /// The two `(predecessor, input bit)` pairs entering `state`, lower
    /// predecessor index first. Both edges carry the same input bit.
    pub fn predecessors(&self, state: usize) -> [(usize, u8); 2] {
        let m = self.memory();
        let mask = self.num_states() - 1;
        let bit = (state >> (m - 1)) as u8 & 1;
        let base = (state << 1) & mask;
        [(base, bit), (base | 1, bit)]
    }

    /// Output words of butterfly `j`: predecessors `2j` and `2j + 1` feed
    /// states `j` (input 0) and `j + S/2` (input 1). Order:
    /// `[w(2j, 0), w(2j+1, 0), w(2j, 1), w(2j+1, 1)]`.
    pub fn butterflies(&self) -> &[[u32; 4]] {
        &self.butterflies
    }

    /// Input bit carried by every edge that enters `state`.
    pub fn input_bit_into(&self, state: usize) -> u8 {
        ((state >> (self.memory() - 1)) & 1) as u8
    }
}

pub fn build_trellis(spec: &CodeSpec) -> Trellis {
    let m = spec.memory();
    let num_states = spec.num_states();
    let mut next = Vec::with_capacity(2 * num_states);
    let mut outputs = Vec::with_capacity(2 * num_states);
    for state in 0..num_states {
        for bit in 0..2u32 {
            let register = (bit << m) | state as u32;
            let word = spec
                .generators()
                .iter()
                .enumerate()
                .fold(0u32, |acc, (c, &g)| {
                    acc | (((g & register).count_ones() & 1) << c)
                });
            next.push((bit << (m - 1)) | (state as u32 >> 1));
            outputs.push(word);
        }
    }
    let butterflies = (0..num_states / 2)
        .map(|j| {
            let (a, b) = (2 * j, 2 * j + 1);
            [
                outputs[2 * a],
                outputs[2 * b],
                outputs[2 * a + 1],
                outputs[2 * b + 1],
            ]
        })
        .collect();
    Trellis {
        spec: spec.clone(),
        next,
        outputs,
        butterflies,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shift_register_step(gens: &[u32], k: usize, reg: &mut Vec<u8>, bit: u8) -> Vec<u8> {
        // reg[0] is the newest bit
        reg.insert(0, bit);
        reg.truncate(k);
        gens.iter()
            .map(|g| {
                (0..k)
                    .filter(|&tap| (g >> (k - 1 - tap)) & 1 == 1)
                    .fold(0u8, |acc, tap| acc ^ reg[tap])
            })
            .collect()
    }

    #[test]
    fn k3_75_matches_shift_register() {
        let spec = CodeSpec::from_octal("7,5", None).unwrap();
        let t = build_trellis(&spec);
        assert_eq!(t.next_state(0b00, 1), 0b10);
        assert_eq!(t.output_bits(0b00, 1), vec![1, 1]);
        for s in 0..4usize {
            for b in 0..2u8 {
                let mut reg = vec![(s >> 1) as u8 & 1, s as u8 & 1, 0];
                let out = shift_register_step(&[7, 5], 3, &mut reg, b);
                assert_eq!(t.output_bits(s, b), out, "state {s} bit {b}");
                let expect_next = ((reg[0] as usize) << 1) | reg[1] as usize;
                assert_eq!(t.next_state(s, b), expect_next);
            }
            assert_ne!(t.next_state(s, 0), t.next_state(s, 1));
        }
    }

    #[test]
    fn k7_rate_third_shape() {
        let spec = CodeSpec::from_octal("171,133,165", None).unwrap();
        assert_eq!(spec.constraint_length(), 7);
        let t = build_trellis(&spec);
        assert_eq!(t.num_states(), 64);
        assert_eq!(t.next.len(), 128);
        assert!((spec.rate() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn every_state_has_two_incoming_edges() {
        for gens in ["7,5", "171,133", "171,133,165", "15,17"] {
            let t = build_trellis(&CodeSpec::from_octal(gens, None).unwrap());
            let mut incoming = vec![Vec::new(); t.num_states()];
            for s in 0..t.num_states() {
                for b in 0..2u8 {
                    incoming[t.next_state(s, b)].push((s, b));
                }
            }
            for (s, inc) in incoming.iter_mut().enumerate() {
                inc.sort();
                assert_eq!(inc.as_slice(), &t.predecessors(s)[..], "{gens} state {s}");
            }
            assert_eq!(t.output_word(0, 0), 0);
            let half = t.num_states() / 2;
            for (j, w) in t.butterflies().iter().enumerate() {
                assert_eq!(t.predecessors(j), [(2 * j, 0), (2 * j + 1, 0)]);
                assert_eq!(t.predecessors(j + half), [(2 * j, 1), (2 * j + 1, 1)]);
                assert_eq!(w[0], t.output_word(2 * j, 0));
                assert_eq!(w[3], t.output_word(2 * j + 1, 1));
            }
        }
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(matches!(
            CodeSpec::new(vec![7, 0], 3),
            Err(Error::Config(_))
        ));
        assert!(matches!(
            CodeSpec::new(vec![0o17, 5], 3),
            Err(Error::Config(_))
        ));
        assert!(matches!(CodeSpec::new(vec![1], 1), Err(Error::Config(_))));
        assert!(CodeSpec::from_octal("7,9", None).is_err());
        assert!(CodeSpec::from_octal("", None).is_err());
    }

    #[test]
    fn explicit_constraint_length_allows_short_generators() {
        let spec = CodeSpec::from_octal("5,3", Some(4)).unwrap();
        assert_eq!(spec.num_states(), 8);
        assert_eq!(spec.to_string(), "K=4 (5,3)");
    }
}
