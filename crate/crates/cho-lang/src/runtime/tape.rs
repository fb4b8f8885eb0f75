//! Per-party read-only tapes: secret inputs and randomness.

use rand::Rng;

use crate::syntax::checked::CheckedProgram;

/// Tape widths per party, in party order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TapeWidths {
    pub secret: Vec<usize>,
    pub random: Vec<usize>,
}

impl TapeWidths {
    pub fn of(p: &CheckedProgram) -> Self {
        TapeWidths {
            secret: p.secret_width.clone(),
            random: p.random_width.clone(),
        }
    }
}

/// Tapes for a batch of runs, stored word-major: bit `slot` of run `r` lives
/// in lane `r % 64` of word `(r / 64) * width + slot`.
#[derive(Debug, Clone)]
pub struct TapeSet {
    pub(crate) runs: usize,
    pub(crate) secret_width: Vec<usize>,
    pub(crate) random_width: Vec<usize>,
    pub(crate) secret: Vec<Vec<u64>>,
    pub(crate) random: Vec<Vec<u64>>,
}

pub(crate) fn words_for(runs: usize) -> usize {
    runs.div_ceil(64)
}

impl TapeSet {
    /// Uniformly random tapes for `runs` runs.
    pub fn random(widths: &TapeWidths, runs: usize, rng: &mut impl Rng) -> TapeSet {
        let nwords = words_for(runs);
        let fill = |width: usize, rng: &mut dyn FnMut() -> u64| -> Vec<u64> {
            (0..nwords * width).map(|_| rng()).collect()
        };
        let mut gen = || rng.gen::<u64>();
        TapeSet {
            runs,
            secret: widths.secret.iter().map(|&w| fill(w, &mut gen)).collect(),
            random: widths.random.iter().map(|&w| fill(w, &mut gen)).collect(),
            secret_width: widths.secret.clone(),
            random_width: widths.random.clone(),
        }
    }

    /// Build tapes from explicit per-run bits: `secret[party][run][slot]`.
    /// All runs of a party must supply the same number of bits.
    pub fn from_run_bits(secret: &[Vec<Vec<u8>>], random: &[Vec<Vec<u8>>]) -> TapeSet {
        let runs = secret
            .iter()
            .chain(random)
            .map(|per_party| per_party.len())
            .max()
            .unwrap_or(0);
        let pack = |per_party: &Vec<Vec<u8>>| -> (usize, Vec<u64>) {
            let width = per_party.first().map_or(0, |bits| bits.len());
            let nwords = words_for(runs);
            let mut words = vec![0u64; nwords * width];
            for (run, bits) in per_party.iter().enumerate() {
                assert_eq!(bits.len(), width, "ragged tape bits");
                for (slot, &b) in bits.iter().enumerate() {
                    if b != 0 {
                        words[(run / 64) * width + slot] |= 1 << (run % 64);
                    }
                }
            }
            (width, words)
        };
        let (secret_width, secret): (Vec<_>, Vec<_>) = secret.iter().map(pack).unzip();
        let (random_width, random): (Vec<_>, Vec<_>) = random.iter().map(pack).unzip();
        TapeSet {
            runs,
            secret_width,
            random_width,
            secret,
            random,
        }
    }

    /// Build tapes directly from word-major parts. `secret[party]` must hold
    /// `ceil(runs/64) * width` words in the layout described on [`TapeSet`].
    pub fn from_words(
        widths: &TapeWidths,
        runs: usize,
        secret: Vec<Vec<u64>>,
        random: Vec<Vec<u64>>,
    ) -> TapeSet {
        let nwords = words_for(runs);
        assert_eq!(secret.len(), widths.secret.len());
        assert_eq!(random.len(), widths.random.len());
        for (words, &w) in secret.iter().zip(&widths.secret) {
            assert_eq!(words.len(), nwords * w, "secret tape size mismatch");
        }
        for (words, &w) in random.iter().zip(&widths.random) {
            assert_eq!(words.len(), nwords * w, "random tape size mismatch");
        }
        TapeSet {
            runs,
            secret_width: widths.secret.clone(),
            random_width: widths.random.clone(),
            secret,
            random,
        }
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    /// Replace the secret tapes with explicit per-run bits
    /// (`secrets[party][run][slot]`), keeping the randomness. Handy for
    /// sweeping fixed inputs under fresh random tapes.
    pub fn with_secret_bits(mut self, secrets: &[Vec<Vec<u8>>]) -> TapeSet {
        assert_eq!(secrets.len(), self.secret.len(), "party count mismatch");
        let nwords = words_for(self.runs);
        for (party, per_party) in secrets.iter().enumerate() {
            assert_eq!(per_party.len(), self.runs, "one bit row per run required");
            let width = per_party.first().map_or(0, |bits| bits.len());
            let mut words = vec![0u64; nwords * width];
            for (run, bits) in per_party.iter().enumerate() {
                assert_eq!(bits.len(), width, "ragged secret bits");
                for (slot, &b) in bits.iter().enumerate() {
                    if b != 0 {
                        words[(run / 64) * width + slot] |= 1 << (run % 64);
                    }
                }
            }
            self.secret_width[party] = width;
            self.secret[party] = words;
        }
        self
    }

    /// Single-run tape slice for lane-independence checks.
    pub fn slice_run(&self, run: usize) -> TapeSet {
        assert!(run < self.runs);
        let (word, lane) = (run / 64, run % 64);
        let slice = |tapes: &[Vec<u64>], widths: &[usize]| -> Vec<Vec<u64>> {
            tapes
                .iter()
                .zip(widths)
                .map(|(words, &w)| {
                    (0..w)
                        .map(|slot| words[word * w + slot] >> lane & 1)
                        .collect()
                })
                .collect()
        };
        TapeSet {
            runs: 1,
            secret: slice(&self.secret, &self.secret_width),
            random: slice(&self.random, &self.random_width),
            secret_width: self.secret_width.clone(),
            random_width: self.random_width.clone(),
        }
    }
}
