//! Bug injection.
//!
//! Four bug classes can be planted while compiling a circuit, with severity
//! set by a bias level `b`: every "biased coin" is the AND of `b` fresh tape
//! flips, so it comes up 1 with probability 2^-b and `b = 1` is the unbiased
//! identity. The convention throughout is that P1 is the honest party whose
//! data leaks and P2 the observed (corrupt) one — matching tests that corrupt
//! P2.
//!
//!   * `BiasedSharing` — the masks hiding P1's inputs use the biased coin.
//!   * `BiasedAnd` — multiplication-gate randomness uses the biased coin:
//!     P2's output-share flip under GMW, the dealer's share masks under
//!     Beaver triples.
//!   * `AccidentalSecret` — for each selected P1 input x, P1 sends
//!     `x + coin` to P2, equal to x with probability 1 - 2^-b.
//!   * `AccidentalGate` — the same leak applied to P1's AND-output share.
//!
//! Mutations never change protocol outputs; they only add leaks or bias.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use cho_lang::{Expr, PartyId, Program, Stmt};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    BiasedSharing,
    BiasedAnd,
    AccidentalSecret,
    AccidentalGate,
}

impl MutationKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MutationKind::BiasedSharing => "biased_sharing",
            MutationKind::BiasedAnd => "biased_and",
            MutationKind::AccidentalSecret => "accidental_secret",
            MutationKind::AccidentalGate => "accidental_gate",
        }
    }

    /// Whether sites are input bits (as opposed to AND gates).
    pub fn targets_inputs(&self) -> bool {
        matches!(self, MutationKind::BiasedSharing | MutationKind::AccidentalSecret)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SiteSelector {
    All,
    Indices(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationSpec {
    pub kind: MutationKind,
    /// Bias level b >= 1; the coin is 1 with probability 2^-b.
    pub bias: u32,
    pub sites: SiteSelector,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("site {index} does not exist: {kind} has {total} site(s) here")]
    NoSuchSite {
        kind: &'static str,
        index: usize,
        total: usize,
    },
    #[error("{kind} cannot be applied to a generic program; only accidental_secret can")]
    IncompatibleKind { kind: &'static str },
    #[error("bad mutation spec: {0}")]
    BadSpec(String),
}

impl MutationSpec {
    pub fn new(kind: MutationKind, bias: u32, sites: SiteSelector, seed: u64) -> Result<Self, MutationError> {
        if bias < 1 {
            return Err(MutationError::BadSpec("bias level must be >= 1".into()));
        }
        Ok(MutationSpec { kind, bias, sites, seed })
    }

    pub(crate) fn selects(&self, site: usize) -> bool {
        match &self.sites {
            SiteSelector::All => true,
            SiteSelector::Indices(list) => list.contains(&site),
        }
    }

    pub(crate) fn check_sites(&self, total: usize) -> Result<(), MutationError> {
        if let SiteSelector::Indices(list) = &self.sites {
            for &index in list {
                if index >= total {
                    return Err(MutationError::NoSuchSite {
                        kind: self.kind.as_str(),
                        index,
                        total,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Flag syntax: `kind=biased_sharing,b=3,sites=all` with optional
/// `sites=0:2:5` (colon-separated indices) and `seed=N`.
impl FromStr for MutationSpec {
    type Err = MutationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut kind = None;
        let mut bias = 1u32;
        let mut sites = SiteSelector::All;
        let mut seed = 0u64;
        for part in s.split(',').filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| MutationError::BadSpec(format!("`{part}` is not key=value")))?;
            match key {
                "kind" => {
                    kind = Some(match value {
                        "biased_sharing" => MutationKind::BiasedSharing,
                        "biased_and" => MutationKind::BiasedAnd,
                        "accidental_secret" => MutationKind::AccidentalSecret,
                        "accidental_gate" => MutationKind::AccidentalGate,
                        other => {
                            return Err(MutationError::BadSpec(format!("unknown kind `{other}`")))
                        }
                    })
                }
                "b" => {
                    bias = value
                        .parse()
                        .map_err(|_| MutationError::BadSpec(format!("bad bias `{value}`")))?
                }
                "sites" => {
                    sites = if value == "all" {
                        SiteSelector::All
                    } else {
                        let indices = value
                            .split(':')
                            .map(|t| t.parse::<usize>())
                            .collect::<Result<Vec<_>, _>>()
                            .map_err(|_| MutationError::BadSpec(format!("bad sites `{value}`")))?;
                        SiteSelector::Indices(indices)
                    }
                }
                "seed" => {
                    seed = value
                        .parse()
                        .map_err(|_| MutationError::BadSpec(format!("bad seed `{value}`")))?
                }
                other => return Err(MutationError::BadSpec(format!("unknown key `{other}`"))),
            }
        }
        let kind = kind.ok_or_else(|| MutationError::BadSpec("missing kind=".into()))?;
        MutationSpec::new(kind, bias, sites, seed)
    }
}

impl fmt::Display for MutationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kind={},b={}", self.kind.as_str(), self.bias)?;
        match &self.sites {
            SiteSelector::All => write!(f, ",sites=all")?,
            SiteSelector::Indices(list) => {
                let joined: Vec<String> = list.iter().map(|i| i.to_string()).collect();
                write!(f, ",sites={}", joined.join(":"))?;
            }
        }
        if self.seed != 0 {
            write!(f, ",seed={}", self.seed)?;
        }
        Ok(())
    }
}

/// Apply `AccidentalSecret` to an arbitrary validated-shape program: after
/// each selected secret read at a party other than `corrupt`, the holder
/// sends the secret XOR the biased coin to `corrupt`. Other kinds target
/// compiler-internal sites and are incompatible here.
pub fn mutate_program(
    p: &Program,
    spec: &MutationSpec,
    corrupt: &PartyId,
) -> Result<Program, MutationError> {
    if spec.kind != MutationKind::AccidentalSecret {
        return Err(MutationError::IncompatibleKind { kind: spec.kind.as_str() });
    }
    let total = p
        .body
        .iter()
        .filter(|s| matches!(s, Stmt::Assign { expr: Expr::Secret(party), .. } if party != corrupt))
        .count();
    spec.check_sites(total)?;

    let mut out = Program { macros: p.macros.clone(), body: Vec::new() };
    let mut site = 0usize;
    for stmt in &p.body {
        out.body.push(stmt.clone());
        if let Stmt::Assign { var, expr: Expr::Secret(party) } = stmt {
            if party != corrupt {
                if spec.selects(site) {
                    let leak = format!("{var}_leak");
                    let coin = emit_coin(&mut out.body, &format!("{leak}_r"), party, spec.bias);
                    out.body.push(Stmt::Assign {
                        var: leak.clone(),
                        expr: Expr::xor(Expr::var(var.clone()), Expr::var(coin)),
                    });
                    out.body.push(Stmt::Send { var: leak, to: corrupt.clone() });
                }
                site += 1;
            }
        }
    }
    Ok(out)
}

/// Emit a biased coin variable: a single flip at b = 1, otherwise the AND of
/// b fresh flips. Returns the coin's variable name.
pub(crate) fn emit_coin(body: &mut Vec<Stmt>, name: &str, party: &PartyId, bias: u32) -> String {
    if bias == 1 {
        body.push(Stmt::Assign { var: name.to_string(), expr: Expr::Flip(party.clone()) });
        return name.to_string();
    }
    let mut flips = Vec::new();
    for j in 0..bias {
        let f = format!("{name}_f{j}");
        body.push(Stmt::Assign { var: f.clone(), expr: Expr::Flip(party.clone()) });
        flips.push(f);
    }
    let mut expr = Expr::var(flips[0].clone());
    for f in &flips[1..] {
        expr = Expr::and(expr, Expr::var(f.clone()));
    }
    body.push(Stmt::Assign { var: name.to_string(), expr });
    name.to_string()
}
