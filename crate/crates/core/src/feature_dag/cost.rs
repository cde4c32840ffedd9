use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::Add;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use super::Label;

/// A unification cost: a non-negative rational, or the absorbing top value
/// for forbidden pairings. `Infinite` compares greater than every finite sum.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(Ratio<u64>),
    Infinite,
}

impl Cost {
    pub const ZERO: Cost = Cost::Finite(Ratio::new_raw(0, 1));
    pub const ONE: Cost = Cost::Finite(Ratio::new_raw(1, 1));

    pub fn int(n: u64) -> Cost {
        Cost::Finite(Ratio::from_integer(n))
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    /// Signed difference `self - other` for finite costs, as used by trace
    /// cost deltas.
    pub fn delta(self, other: Cost) -> CostDelta {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) if a >= b => CostDelta::Up(a - b),
            (Cost::Finite(a), Cost::Finite(b)) => CostDelta::Down(b - a),
            _ => CostDelta::Unbounded,
        }
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Cost::Finite(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Cost::Infinite => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Change of total cost carried by a trace event.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CostDelta {
    Up(Ratio<u64>),
    Down(Ratio<u64>),
    Unbounded,
}

impl fmt::Display for CostDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |r: &Ratio<u64>| {
            if *r.denom() == 1 {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        };
        match self {
            CostDelta::Up(r) => write!(f, "+{}", show(r)),
            CostDelta::Down(r) => write!(f, "-{}", show(r)),
            CostDelta::Unbounded => f.write_str("+inf"),
        }
    }
}

/// Symbolic table entry; `K` resolves to the model's marked-pairing constant.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Weight {
    Zero,
    One,
    K,
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostModelError {
    #[error("k must be greater than 1, got {0}")]
    KTooSmall(String),
    #[error("cannot parse `{0}` as a rational number")]
    BadRational(String),
}

/// Case/role pairing costs, looked up by unordered label pair.
#[derive(Clone, Debug, PartialEq)]
pub struct CostModel {
    k: Ratio<u64>,
    table: BTreeMap<(Label, Label), Weight>,
    aliases: BTreeMap<Label, Label>,
}

impl Default for CostModel {
    /// The standard table with k = 2.
    fn default() -> Self {
        let mut m = CostModel::blank(Ratio::from_integer(2));
        for (x, y, w) in [
            ("nom", "agent", Weight::One),
            ("dat", "co-agent", Weight::One),
            ("acc", "object", Weight::One),
            ("object", "nom", Weight::K),
            ("dat", "agent", Weight::K),
            ("t", "object", Weight::K),
            ("nom", "dat", Weight::Infinite),
            ("agent", "co-agent", Weight::Infinite),
        ] {
            m.set(x, y, w);
        }
        for (short, long) in [("agt", "agent"), ("cgt", "co-agent"), ("obj", "object")] {
            m.aliases.insert(Label::new(short), Label::new(long));
        }
        m
    }
}

impl CostModel {
    /// A model with an empty table: every distinct pair is forbidden.
    pub fn blank(k: Ratio<u64>) -> Self {
        CostModel { k, table: BTreeMap::new(), aliases: BTreeMap::new() }
    }

    /// Replaces k; it must exceed 1.
    pub fn with_k(mut self, k: Ratio<u64>) -> Result<Self, CostModelError> {
        if k <= Ratio::from_integer(1) {
            return Err(CostModelError::KTooSmall(k.to_string()));
        }
        self.k = k;
        Ok(self)
    }

    pub fn k(&self) -> Ratio<u64> {
        self.k
    }

    fn canon(&self, l: &Label) -> Label {
        self.aliases.get(l).cloned().unwrap_or_else(|| l.clone())
    }

    fn key(&self, x: &Label, y: &Label) -> (Label, Label) {
        let (x, y) = (self.canon(x), self.canon(y));
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    pub fn set(&mut self, x: &str, y: &str, w: Weight) {
        let key = self.key(&Label::new(x), &Label::new(y));
        self.table.insert(key, w);
    }

    /// Cost of identifying `x` with `y`: 0 for equal labels, the table entry
    /// for the unordered pair otherwise, and infinite when unlisted.
    pub fn lookup(&self, x: &Label, y: &Label) -> Cost {
        if self.canon(x) == self.canon(y) {
            return Cost::ZERO;
        }
        match self.table.get(&self.key(x, y)) {
            Some(Weight::Zero) => Cost::ZERO,
            Some(Weight::One) => Cost::ONE,
            Some(Weight::K) => Cost::Finite(self.k),
            Some(Weight::Infinite) | None => Cost::Infinite,
        }
    }

    /// Listed entries, in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&Label, &Label, Weight)> {
        self.table.iter().map(|((x, y), w)| (x, y, *w))
    }
}

/// Parses `2`, `3/2` or `1.5` as a non-negative rational.
pub fn parse_rational(text: &str) -> Result<Ratio<u64>, CostModelError> {
    let bad = || CostModelError::BadRational(text.to_string());
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || frac.len() > 18 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let denom = 10u64.pow(frac.len() as u32);
        let frac: u64 = frac.parse().map_err(|_| bad())?;
        return int
            .checked_mul(denom)
            .and_then(|v| v.checked_add(frac))
            .map(|n| Ratio::new(n, denom))
            .ok_or_else(bad);
    }
    let r = Ratio::<u64>::from_str(t).map_err(|_| bad())?;
    Ok(r)
}
