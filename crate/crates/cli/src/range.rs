use std::fmt;
use std::str::FromStr;

/// Inclusive integer range written `7`, `8..20` or `8..=20`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn iter(self) -> std::ops::RangeInclusive<usize> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range bound {t:?} in {s:?}"));
        let span = match s.split_once("..") {
            Some((lo, hi)) => Span {
                lo: num(lo)?,
                hi: num(hi.strip_prefix('=').unwrap_or(hi))?,
            },
            None => {
                let v = num(s)?;
                Span { lo: v, hi: v }
            }
        };
        if span.lo > span.hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(span)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!("7".parse::<Span>().unwrap(), Span { lo: 7, hi: 7 });
        assert_eq!("8..20".parse::<Span>().unwrap(), Span { lo: 8, hi: 20 });
        assert_eq!("8..=20".parse::<Span>().unwrap().iter().count(), 13);
        assert!("9..8".parse::<Span>().is_err());
        assert!("x".parse::<Span>().is_err());
    }
}
