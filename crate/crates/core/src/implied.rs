//! What an `α`-guarantee under one criterion implies under another.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::criteria::Criterion;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Setting {
    Additive,
    Submodular,
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Setting::Additive => "additive",
            Setting::Submodular => "submodular",
        })
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Setting> {
        match s.trim().to_ascii_lowercase().as_str() {
            "additive" => Ok(Setting::Additive),
            "submodular" => Ok(Setting::Submodular),
            _ => Err(Error::Parse(format!("unknown setting `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Guarantee {
    Bound(Rational),
    /// No finite factor follows.
    Unbounded,
    /// Nothing beyond the universal bound of [`trivial_bound`].
    TrivialOnly,
}

impl fmt::Display for Guarantee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guarantee::Bound(r) => fmt::Display::fmt(r, f),
            Guarantee::Unbounded => f.pad("unbounded"),
            Guarantee::TrivialOnly => f.pad("trivial"),
        }
    }
}

/// The factor every allocation achieves under subadditive costs: 2 for
/// PMMS and `n` for MMS.
pub fn trivial_bound(crit: Criterion, n: usize) -> Option<Rational> {
    match crit {
        Criterion::Pmms => Some(Rational::from(2)),
        Criterion::Mms => Some(Rational::from(n)),
        _ => None,
    }
}

fn r(v: i128) -> Rational {
    Rational::from_integer(v)
}

fn out_of_range(entry: String, alpha: Rational, range: &str) -> Error {
    Error::AlphaOutOfRange {
        entry,
        alpha: alpha.to_string(),
        range: range.into(),
    }
}

/// Looks up the guarantee that `alpha`-`src` gives for `dst` with `n` agents.
///
/// Pairs with no known result are refused rather than guessed.
pub fn implied_guarantee(
    src: Criterion,
    alpha: Rational,
    dst: Criterion,
    n: usize,
    setting: Setting,
) -> Result<Guarantee> {
    use Criterion::*;
    use Guarantee::*;

    if alpha < Rational::ONE {
        return Err(Error::Argument(format!("alpha must be at least 1, got {alpha}")));
    }
    if n < 2 {
        return Err(Error::Argument(format!("implied guarantees need n >= 2, got {n}")));
    }
    let entry = format!("{src} -> {dst} ({setting}, n={n})");
    if src == dst {
        return Ok(Bound(alpha));
    }
    if src == EfxStrong || dst == EfxStrong {
        return Err(Error::NotInTable(entry));
    }
    if dst == Ef {
        return Ok(Unbounded);
    }
    let a = alpha;
    let nn = Rational::from(n);
    let one = Rational::ONE;
    let two = r(2);
    let pmms_range = |e: String| -> Result<()> {
        if a > two {
            Err(out_of_range(e, a, "[1, 2]"))
        } else {
            Ok(())
        }
    };

    let g = match (setting, src, dst) {
        (_, Ef, Efx | Ef1) => Bound(a),
        (_, Efx, Ef1) => Bound(a),
        (_, Ef1, Efx) => Unbounded,
        (_, Mms, Ef1 | Efx) => Unbounded,
        (_, Mms, Pmms) => {
            if n >= 3 {
                TrivialOnly
            } else {
                Bound(a)
            }
        }

        (Setting::Additive, Ef, Mms) => Bound(nn * a / (nn - one + a)),
        (Setting::Additive, Ef, Pmms) => Bound(two * a / (a + one)),
        (Setting::Additive, Ef1, Mms) => Bound((nn * a + nn - one) / (nn - one + a)),
        (Setting::Additive, Efx, Mms) => {
            let x = two * nn * a / (nn - one + two * a);
            let y = (nn * a + nn - one) / (nn - one + a);
            Bound(x.min(y))
        }
        (Setting::Additive, Efx, Pmms) => Bound(r(4) * a / (two * a + one)),
        (Setting::Additive, Ef1, Pmms) => Bound((two * a + one) / (a + one)),
        (Setting::Additive, Pmms, Efx | Ef1) => {
            pmms_range(entry)?;
            if a == one {
                Bound(one)
            } else {
                Unbounded
            }
        }
        (Setting::Additive, Pmms, Mms) => {
            pmms_range(entry.clone())?;
            let mid = |a: Rational| nn * a / (a + (nn - one) * (one - a / two));
            let three_halves = Rational::new(3, 2);
            match n {
                2 => Bound(a),
                3 if a == one => Bound(Rational::new(4, 3)),
                3 if a < three_halves => Bound(mid(a)),
                3 => TrivialOnly,
                _ if a == one => Bound(two * nn / (nn + one)),
                _ if a < three_halves => Bound(mid(a)),
                _ => return Err(Error::NotInTable(format!("{entry} at alpha {a}"))),
            }
        }

        (Setting::Submodular, Ef | Efx | Ef1, Mms | Pmms) => TrivialOnly,
        (Setting::Submodular, Pmms, Mms) => {
            pmms_range(entry)?;
            let half_up = Rational::from(n.div_ceil(2));
            Bound(nn.min(a * half_up))
        }
        (Setting::Submodular, Pmms, Efx | Ef1) => {
            pmms_range(entry)?;
            Unbounded
        }
        _ => return Err(Error::NotInTable(entry)),
    };
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use Criterion::*;

    fn add(src: Criterion, a: Rational, dst: Criterion, n: usize) -> Result<Guarantee> {
        implied_guarantee(src, a, dst, n, Setting::Additive)
    }

    #[test]
    fn documented_entries() {
        assert_eq!(add(Ef1, q(1, 1), Mms, 4).unwrap(), Guarantee::Bound(q(7, 4)));
        for n in 2..6 {
            assert_eq!(add(Efx, q(1, 1), Pmms, n).unwrap(), Guarantee::Bound(q(4, 3)));
        }
        assert_eq!(
            implied_guarantee(Pmms, q(3, 2), Mms, 5, Setting::Submodular).unwrap(),
            Guarantee::Bound(q(9, 2))
        );
    }

    #[test]
    fn pmms_to_mms_cases() {
        assert_eq!(add(Pmms, q(1, 1), Mms, 3).unwrap(), Guarantee::Bound(q(4, 3)));
        assert_eq!(add(Pmms, q(1, 1), Mms, 5).unwrap(), Guarantee::Bound(q(5, 3)));
        assert_eq!(add(Pmms, q(7, 4), Mms, 3).unwrap(), Guarantee::TrivialOnly);
        assert!(matches!(add(Pmms, q(7, 4), Mms, 4), Err(Error::NotInTable(_))));
        assert!(matches!(add(Pmms, q(5, 2), Mms, 3), Err(Error::AlphaOutOfRange { .. })));
        // n = 4, α = 5/4: 5 / (5/4 + 3·3/8) = 40/19
        assert_eq!(add(Pmms, q(5, 4), Mms, 4).unwrap(), Guarantee::Bound(q(40, 19)));
    }

    #[test]
    fn markers() {
        assert_eq!(add(Pmms, q(1, 1), Efx, 3).unwrap(), Guarantee::Bound(q(1, 1)));
        assert_eq!(add(Pmms, q(6, 5), Ef1, 3).unwrap(), Guarantee::Unbounded);
        assert_eq!(add(Mms, q(1, 1), Pmms, 3).unwrap(), Guarantee::TrivialOnly);
        assert_eq!(add(Mms, q(1, 1), Pmms, 2).unwrap(), Guarantee::Bound(q(1, 1)));
        assert_eq!(add(Ef1, q(1, 1), Ef, 2).unwrap(), Guarantee::Unbounded);
        assert_eq!(
            implied_guarantee(Ef, q(1, 1), Mms, 4, Setting::Submodular).unwrap(),
            Guarantee::TrivialOnly
        );
        assert!(matches!(add(EfxStrong, q(1, 1), Mms, 3), Err(Error::NotInTable(_))));
        assert!(add(Ef, q(1, 2), Mms, 3).is_err());
        assert!(add(Ef, q(1, 1), Mms, 1).is_err());
    }

    #[test]
    fn trivial_values() {
        assert_eq!(trivial_bound(Pmms, 7), Some(q(2, 1)));
        assert_eq!(trivial_bound(Mms, 7), Some(q(7, 1)));
        assert_eq!(trivial_bound(Ef1, 7), None);
    }
}
