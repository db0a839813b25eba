use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    A,
    DMinus,
    DPlus,
    /// `D_{m+1}` with `m` even, where the two signs are equivalent.
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// A stable simple singularity, identified by family, index and sign.
///
/// `index` is `m` for `A_{m+1}` and `D_{m+1}`, and 6, 7 or 8 for the E-series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SingularityType {
    family: Family,
    index: u32,
    sign: Sign,
}

impl SingularityType {
    pub fn new(family: Family, index: u32, sign: Sign) -> Result<Self> {
        let bad = |why: &str| {
            Err(Error::InvalidSingularity(format!(
                "{family:?} index {index} sign {}: {why}",
                sign.symbol()
            )))
        };
        match family {
            Family::A => {}
            Family::DMinus | Family::DPlus => {
                if index < 3 {
                    return bad("D-series requires m >= 3");
                }
                if index % 2 == 0 {
                    return bad("D+/D- variants require odd m; use family D for even m");
                }
                let expected = if family == Family::DPlus {
                    Sign::Plus
                } else {
                    Sign::Minus
                };
                if sign != expected {
                    return bad("sign is fixed by the D+/D- family");
                }
            }
            Family::D => {
                if index < 3 {
                    return bad("D-series requires m >= 3");
                }
                if index % 2 == 1 {
                    return bad("odd m needs an explicit D+ or D- variant");
                }
            }
            Family::E => {
                if !(6..=8).contains(&index) {
                    return bad("E-series index must be 6, 7 or 8");
                }
                if index != 6 && sign == Sign::Minus {
                    return bad("only E6 carries a sign choice");
                }
            }
        }
        Ok(Self {
            family,
            index,
            sign,
        })
    }

    /// `A_{m+1}` with `f = ±θ^{m+2}`.
    pub fn a(m: u32, sign: Sign) -> Result<Self> {
        Self::new(Family::A, m, sign)
    }

    /// The D-series member with parameter `m`: `D±` for odd `m`, plain `D` for even `m`.
    pub fn d(m: u32, sign: Sign) -> Result<Self> {
        if m % 2 == 1 {
            let family = match sign {
                Sign::Plus => Family::DPlus,
                Sign::Minus => Family::DMinus,
            };
            Self::new(family, m, sign)
        } else {
            Self::new(Family::D, m, sign)
        }
    }

    pub fn e(index: u32, sign: Sign) -> Result<Self> {
        Self::new(Family::E, index, sign)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Subscript as written in the usual notation (`A_2` has subscript 2).
    pub fn subscript(&self) -> u32 {
        match self.family {
            Family::E => self.index,
            _ => self.index + 1,
        }
    }

    /// Sign-normalized identity used for the subordination diagram, where the
    /// A-series sign, the even-D sign and the E6 sign play no role.
    pub fn dag_key(&self) -> SingularityType {
        match self.family {
            Family::DMinus | Family::DPlus => *self,
            _ => SingularityType {
                sign: Sign::Plus,
                ..*self
            },
        }
    }

    /// Same type with the opposite sign, when the family allows it.
    pub fn with_sign(&self, sign: Sign) -> Result<Self> {
        match self.family {
            Family::DMinus | Family::DPlus => Self::d(self.index, sign),
            _ => Self::new(self.family, self.index, sign),
        }
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.family {
            Family::A => 'A',
            Family::E => 'E',
            _ => 'D',
        };
        write!(f, "{letter}{}", self.subscript())?;
        match (self.family, self.sign) {
            (Family::DMinus, _) => write!(f, "-"),
            (Family::DPlus, _) => write!(f, "+"),
            (_, Sign::Minus) => write!(f, "-"),
            _ => Ok(()),
        }
    }
}

/// Parses labels such as `A2`, `A3-`, `D4-`, `D4+`, `D5`, `E6`, `E6-`.
///
/// For odd-m D types the sign suffix is required; `A`, even-m `D` and `E6`
/// default to `+`.
impl FromStr for SingularityType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::InvalidSingularity(format!("cannot parse label {s:?}"));
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(err)?.to_ascii_uppercase();
        let rest: &str = chars.as_str();
        let (digits, suffix) = match rest.find(|c: char| !c.is_ascii_digit()) {
            Some(i) => rest.split_at(i),
            None => (rest, ""),
        };
        let sub: u32 = digits.parse().map_err(|_| err())?;
        let sign = match suffix {
            "" => None,
            "+" | "p" | "plus" => Some(Sign::Plus),
            "-" | "m" | "minus" => Some(Sign::Minus),
            _ => return Err(err()),
        };
        match letter {
            'A' => {
                if sub == 0 {
                    return Err(err());
                }
                Self::a(sub - 1, sign.unwrap_or(Sign::Plus))
            }
            'D' => {
                if sub < 4 {
                    return Err(Error::InvalidSingularity(format!(
                        "{s}: D-series starts at D4"
                    )));
                }
                let m = sub - 1;
                match (m % 2, sign) {
                    (1, None) => Err(Error::InvalidSingularity(format!(
                        "{s}: odd-m D types need a + or - suffix"
                    ))),
                    (_, sign) => Self::d(m, sign.unwrap_or(Sign::Plus)),
                }
            }
            'E' => Self::e(sub, sign.unwrap_or(Sign::Plus)),
            _ => Err(err()),
        }
    }
}

impl TryFrom<String> for SingularityType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SingularityType> for String {
    fn from(t: SingularityType) -> String {
        t.to_string()
    }
}
