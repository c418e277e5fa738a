use std::str::FromStr;

use super::{PermError, Permutation};

impl Permutation {
    /// Parses either image-list notation `[1,2,0]` or cycle notation
    /// `(0 1 2)(3 4)`. Cycle notation needs the degree unless the largest
    /// mentioned point determines it.
    pub fn parse(text: &str, degree: Option<usize>) -> Result<Self, PermError> {
        let s = text.trim();
        if let Some(body) = s.strip_prefix('[') {
            let body = body.strip_suffix(']').ok_or_else(|| PermError::Parse(format!("unterminated list in {s:?}")))?;
            let images = if body.trim().is_empty() {
                Vec::new()
            } else {
                body.split(',').map(parse_point).collect::<Result<Vec<_>, _>>()?
            };
            if let Some(d) = degree {
                if d != images.len() {
                    return Err(PermError::DegreeMismatch { expected: d, found: images.len() });
                }
            }
            return Permutation::new(images);
        }

        let mut cycles = Vec::new();
        let mut rest = s;
        while !rest.is_empty() {
            let open = rest.strip_prefix('(').ok_or_else(|| PermError::Parse(format!("expected '(' in {s:?}")))?;
            let close = open.find(')').ok_or_else(|| PermError::Parse(format!("unterminated cycle in {s:?}")))?;
            let inner = &open[..close];
            let points: Vec<usize> = inner
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(parse_point)
                .collect::<Result<_, _>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = open[close + 1..].trim_start();
        }
        let needed = cycles.iter().flatten().map(|&x| x + 1).max().unwrap_or(0);
        let degree = degree.unwrap_or(needed);
        Permutation::from_cycles(degree, &cycles)
    }
}

fn parse_point(token: &str) -> Result<usize, PermError> {
    token.trim().parse::<usize>().map_err(|_| PermError::Parse(format!("bad point {token:?}")))
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Permutation::parse(s, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn both_notations() {
        let a: Permutation = "[1,2,0]".parse().unwrap();
        let b = Permutation::parse("(0 1 2)", Some(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(Permutation::parse("()", Some(4)).unwrap(), Permutation::identity(4));
        assert_eq!(Permutation::parse("(0,3)(1 2)", None).unwrap().images(), &[3, 2, 1, 0]);
        assert!(Permutation::parse("(0 1", Some(3)).is_err());
        assert!(Permutation::parse("(0 5)", Some(3)).is_err());
        assert!(Permutation::parse("[0,0]", None).is_err());
    }

    fn arb_perm() -> impl Strategy<Value = Permutation> {
        (1usize..12).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle()).prop_map(|v| Permutation::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn printed_forms_reparse(p in arb_perm()) {
            prop_assert_eq!(Permutation::parse(&p.to_string(), Some(p.degree())).unwrap(), p.clone());
            prop_assert_eq!(p.to_image_string().parse::<Permutation>().unwrap(), p.clone());
            prop_assert!(p.then(&p.inverse()).is_identity());
            prop_assert!(p.inverse().then(&p).is_identity());
        }
    }
}
