use crate::frobenius::{FrobeniusError, FrobeniusSpec};
use crate::numtheory::reduce;

/// A circulant digraph on `Z_n`: `a → b` iff `b - a ∈ connection`. When a
/// complement is present the connection set is a union of its orbits and the
/// complement acts fixed-point-freely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculantSpec {
    pub n: usize,
    /// Sorted, without 0.
    pub connection: Vec<usize>,
    /// All complement elements, sorted; empty when none was given.
    pub complement: Vec<u64>,
}

impl CirculantSpec {
    pub fn new(n: usize, connection: &[usize]) -> Self {
        let mut connection: Vec<usize> = connection.iter().map(|&s| s % n).filter(|&s| s != 0).collect();
        connection.sort_unstable();
        connection.dedup();
        CirculantSpec { n, connection, complement: Vec::new() }
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.connection.binary_search(&((b + self.n - a) % self.n)).is_ok()
    }

    /// Arc colouring: 1 on arcs, 0 elsewhere.
    pub fn colors(&self) -> Vec<u32> {
        let n = self.n;
        (0..n * n).map(|i| u32::from(self.is_adjacent(i / n, i % n))).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n).flat_map(|a| self.connection.iter().map(move |&s| (a, (a + s) % n))).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.connection.iter().all(|&s| self.connection.binary_search(&(self.n - s)).is_ok())
    }
}

/// Circulant on `Z_n` whose connection set is the union of the orbits of
/// `orbit_reps` under the group generated by `units`; rejects complements
/// with fixed points.
pub fn frobenius_circulant(n: u64, units: &[i64], orbit_reps: &[i64]) -> Result<CirculantSpec, FrobeniusError> {
    let spec = FrobeniusSpec::cyclic(n, units)?;
    let group = spec.validate()?;
    let mut complement: Vec<u64> = (1..n).filter(|&u| group.complement_orbit(1).contains(&(u as usize))).collect();
    complement.sort_unstable();
    let mut connection = Vec::new();
    for &h in orbit_reps {
        let h = reduce(h, n);
        if h == 0 {
            return Err(FrobeniusError::Spec("orbit representative 0 is not allowed".into()));
        }
        connection.extend(group.complement_orbit(h as usize));
    }
    let mut spec = CirculantSpec::new(n as usize, &connection);
    spec.complement = complement;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c81 = frobenius_circulant(81, &[-1], &[1]).unwrap();
        assert_eq!(c81.connection, vec![1, 80]);
        assert_eq!(c81.complement, vec![1, 80]);
        assert_eq!(c81.edges().len(), 162);

        let c105 = frobenius_circulant(105, &[-1], &[1, 2]).unwrap();
        assert_eq!(c105.connection, vec![1, 2, 103, 104]);
        assert!(c105.is_symmetric());

        match frobenius_circulant(15, &[4], &[1]) {
            Err(FrobeniusError::FixedPoint { complement, kernel_element, .. }) => {
                assert_eq!((complement.as_str(), kernel_element), ("4", 5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn complement_preserves_connection_set() {
        let c = frobenius_circulant(91, &[9], &[1, 5]).unwrap();
        for &u in &c.complement {
            for &s in &c.connection {
                assert!(c.connection.contains(&((s as u64 * u % 91) as usize)));
            }
            // fixed-point-free
            if u != 1 {
                assert_eq!(crate::numtheory::gcd(u - 1, 91), 1);
            }
        }
    }
}
