//! Textual set-family descriptors: the single parsing entry point for
//! everything that names a set in configs, CLI arguments, and report rows.
//!
//! Grammar (colon-separated, no whitespace):
//!   explicit:a,b,c | interval:lo..hi | subgroup:d | random:n[:seed]
//!   | random-nz:n[:seed] | geom:base:n | recip-shift:a:k:Z
//!
//! `random` draws from all of F_p, `random-nz` from the nonzero elements;
//! both may omit their seed in config templates, in which case the harness
//! fills one in per trial, and emitted rows always carry the concrete seed
//! so they replay.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fpsums_core::expsum::TrinomialSpec;
use fpsums_core::{FieldCtx, FpSet};

use crate::error::{HarnessError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Explicit(Vec<u64>),
    /// Elements lo..=hi reduced mod p (translates to interval(k = lo-1,
    /// Z = hi-lo+1)).
    Interval {
        lo: i64,
        hi: i64,
    },
    Subgroup {
        d: u64,
    },
    Random {
        n: u64,
        seed: Option<u64>,
    },
    RandomNz {
        n: u64,
        seed: Option<u64>,
    },
    Geom {
        base: u64,
        n: u64,
    },
    RecipShift {
        a: u64,
        k: i64,
        z: u64,
    },
}

fn err(text: &str, pos: usize, msg: impl Into<String>) -> HarnessError {
    HarnessError::Parse {
        text: text.to_string(),
        pos,
        msg: msg.into(),
    }
}

fn parse_num<T: FromStr>(text: &str, pos: usize, part: &str, what: &str) -> Result<T> {
    part.parse()
        .map_err(|_| err(text, pos, format!("expected {what}, got {part:?}")))
}

impl FamilySpec {
    pub fn parse(text: &str) -> Result<FamilySpec> {
        let (kind, rest) = match text.split_once(':') {
            Some(pair) => pair,
            None => return Err(err(text, text.len(), "missing ':' after family kind")),
        };
        let body = kind.len() + 1;
        match kind {
            "explicit" => {
                if rest.is_empty() {
                    return Err(err(text, body, "empty element list"));
                }
                let mut elems = Vec::new();
                let mut pos = body;
                for part in rest.split(',') {
                    elems.push(parse_num(text, pos, part, "field element")?);
                    pos += part.len() + 1;
                }
                Ok(FamilySpec::Explicit(elems))
            }
            "interval" => {
                let (lo, hi) = rest
                    .split_once("..")
                    .ok_or_else(|| err(text, body, "expected lo..hi"))?;
                let lo: i64 = parse_num(text, body, lo, "integer")?;
                let hi: i64 = parse_num(text, body + 2, hi, "integer")?;
                if hi < lo {
                    return Err(err(text, body, format!("empty range {lo}..{hi}")));
                }
                Ok(FamilySpec::Interval { lo, hi })
            }
            "subgroup" => Ok(FamilySpec::Subgroup {
                d: parse_num(text, body, rest, "subgroup order")?,
            }),
            "random" | "random-nz" => {
                let (n, seed) = match rest.split_once(':') {
                    None => (parse_num(text, body, rest, "set size")?, None),
                    Some((n, seed)) => (
                        parse_num(text, body, n, "set size")?,
                        Some(parse_num(text, body + n.len() + 1, seed, "seed")?),
                    ),
                };
                if kind == "random" {
                    Ok(FamilySpec::Random { n, seed })
                } else {
                    Ok(FamilySpec::RandomNz { n, seed })
                }
            }
            "geom" => {
                let (base, n) = rest
                    .split_once(':')
                    .ok_or_else(|| err(text, body, "expected base:n"))?;
                Ok(FamilySpec::Geom {
                    base: parse_num(text, body, base, "base")?,
                    n: parse_num(text, body + base.len() + 1, n, "length")?,
                })
            }
            "recip-shift" => {
                let mut parts = rest.splitn(3, ':');
                let a = parts
                    .next()
                    .ok_or_else(|| err(text, body, "expected a:k:Z"))?;
                let k = parts
                    .next()
                    .ok_or_else(|| err(text, body, "expected a:k:Z"))?;
                let z = parts
                    .next()
                    .ok_or_else(|| err(text, body, "expected a:k:Z"))?;
                Ok(FamilySpec::RecipShift {
                    a: parse_num(text, body, a, "shift")?,
                    k: parse_num(text, body + a.len() + 1, k, "anchor")?,
                    z: parse_num(text, body + a.len() + k.len() + 2, z, "length")?,
                })
            }
            _ => Err(err(text, 0, format!("unknown family kind {kind:?}"))),
        }
    }

    /// Concrete instance of a seedless `random` template; other kinds are
    /// returned unchanged.
    pub fn with_seed(&self, seed: u64) -> FamilySpec {
        match self {
            FamilySpec::Random { n, seed: None } => FamilySpec::Random {
                n: *n,
                seed: Some(seed),
            },
            FamilySpec::RandomNz { n, seed: None } => FamilySpec::RandomNz {
                n: *n,
                seed: Some(seed),
            },
            other => other.clone(),
        }
    }

    pub fn needs_seed(&self) -> bool {
        matches!(
            self,
            FamilySpec::Random { seed: None, .. } | FamilySpec::RandomNz { seed: None, .. }
        )
    }

    /// Builds the set. Also returns the count of skipped window elements
    /// for recip-shift families (zero elsewhere).
    pub fn build_counted(&self, ctx: &Arc<FieldCtx>) -> Result<(FpSet, u64)> {
        match self {
            FamilySpec::Explicit(elems) => Ok((FpSet::from_elems(ctx, elems.iter().copied()), 0)),
            FamilySpec::Interval { lo, hi } => {
                Ok((FpSet::interval(ctx, lo - 1, (hi - lo + 1) as u64)?, 0))
            }
            FamilySpec::Subgroup { d } => Ok((FpSet::subgroup(ctx, *d)?, 0)),
            FamilySpec::Random { n, seed } => {
                let seed = seed.ok_or_else(|| {
                    HarnessError::Config(format!("family {self} needs a seed to build"))
                })?;
                Ok((FpSet::random(ctx, *n, seed)?, 0))
            }
            FamilySpec::RandomNz { n, seed } => {
                let seed = seed.ok_or_else(|| {
                    HarnessError::Config(format!("family {self} needs a seed to build"))
                })?;
                Ok((FpSet::random_nonzero(ctx, *n, seed)?, 0))
            }
            FamilySpec::Geom { base, n } => Ok((FpSet::geometric(ctx, *base, *n)?, 0)),
            FamilySpec::RecipShift { a, k, z } => {
                let (set, skipped) = FpSet::recip_shift(ctx, *a, *k, *z)?;
                Ok((set, skipped))
            }
        }
    }

    pub fn build(&self, ctx: &Arc<FieldCtx>) -> Result<FpSet> {
        Ok(self.build_counted(ctx)?.0)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Explicit(elems) => {
                write!(f, "explicit:")?;
                for (i, e) in elems.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
            FamilySpec::Interval { lo, hi } => write!(f, "interval:{lo}..{hi}"),
            FamilySpec::Subgroup { d } => write!(f, "subgroup:{d}"),
            FamilySpec::Random { n, seed: None } => write!(f, "random:{n}"),
            FamilySpec::Random {
                n,
                seed: Some(seed),
            } => write!(f, "random:{n}:{seed}"),
            FamilySpec::RandomNz { n, seed: None } => write!(f, "random-nz:{n}"),
            FamilySpec::RandomNz {
                n,
                seed: Some(seed),
            } => write!(f, "random-nz:{n}:{seed}"),
            FamilySpec::Geom { base, n } => write!(f, "geom:{base}:{n}"),
            FamilySpec::RecipShift { a, k, z } => write!(f, "recip-shift:{a}:{k}:{z}"),
        }
    }
}

/// Trinomial descriptor used in report rows: trinom:a:b:c:k:l:m:j.
/// Not a set family; carried in the same column so rows self-describe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrinomDescriptor {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub k: u64,
    pub l: u64,
    pub m: u64,
    pub j: u64,
}

impl TrinomDescriptor {
    pub fn parse(text: &str) -> Result<TrinomDescriptor> {
        let rest = text
            .strip_prefix("trinom:")
            .ok_or_else(|| err(text, 0, "expected trinom:a:b:c:k:l:m:j"))?;
        let parts: Vec<&str> = rest.split(':').collect();
        if parts.len() != 7 {
            return Err(err(text, 7, "expected seven ':'-separated integers"));
        }
        let mut vals = [0u64; 7];
        let mut pos = 7;
        for (slot, part) in vals.iter_mut().zip(&parts) {
            *slot = parse_num(text, pos, part, "integer")?;
            pos += part.len() + 1;
        }
        let [a, b, c, k, l, m, j] = vals;
        Ok(TrinomDescriptor {
            a,
            b,
            c,
            k,
            l,
            m,
            j,
        })
    }

    pub fn to_spec(self) -> TrinomialSpec {
        TrinomialSpec {
            a: self.a,
            b: self.b,
            c: self.c,
            k: self.k,
            l: self.l,
            m: self.m,
            chi_index: self.j,
        }
    }
}

impl fmt::Display for TrinomDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trinom:{}:{}:{}:{}:{}:{}:{}",
            self.a, self.b, self.c, self.k, self.l, self.m, self.j
        )
    }
}
