use num_bigint::BigUint;

use super::Permutation;

/// Base and strong generating set built by the deterministic Schreier-Sims
/// algorithm. New base points are the smallest point moved by the generator
/// that required them.
#[derive(Debug, Clone)]
pub struct StabilizerChain {
    degree: usize,
    base: Vec<usize>,
    strong: Vec<Permutation>,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    /// Indices into `strong` of the generators fixing all earlier base points.
    gens: Vec<usize>,
    orbit: Vec<usize>,
    /// Schreier vector: `(parent, generator)` with `point = parent^generator`.
    tree: Vec<Option<(usize, usize)>>,
}

impl StabilizerChain {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        Self::with_base_prefix(degree, generators, &[])
    }

    pub fn with_base_prefix(degree: usize, generators: &[Permutation], prefix: &[usize]) -> Self {
        let mut strong: Vec<Permutation> = Vec::new();
        for g in generators {
            if !g.is_identity() && !strong.contains(g) {
                strong.push(g.clone());
            }
        }
        let mut chain = StabilizerChain { degree, base: prefix.to_vec(), strong, levels: Vec::new() };
        for gi in 0..chain.strong.len() {
            if chain.base.iter().all(|&b| chain.strong[gi].image(b) == b) {
                let p = first_moved(&chain.strong[gi]).unwrap();
                chain.base.push(p);
            }
        }
        chain.rebuild_levels();
        chain.schreier_sims();
        chain
    }

    pub fn base(&self) -> &[usize] {
        &self.base
    }

    pub fn strong_generators(&self) -> &[Permutation] {
        &self.strong
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Basic orbit lengths, one per base point.
    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        let (h, _) = self.sift(g.clone(), 0);
        h.is_identity()
    }

    /// Generators of the stabilizer of `point`, which must be the first base
    /// point (or fixed by the whole group).
    pub fn stabilizer_generators(&self, point: usize) -> Vec<Permutation> {
        match self.base.first() {
            Some(&b) if b == point => match self.levels.get(1) {
                Some(level) => level.gens.iter().map(|&i| self.strong[i].clone()).collect(),
                None => Vec::new(),
            },
            Some(_) if self.strong.iter().any(|g| g.image(point) != point) => {
                StabilizerChain::with_base_prefix(self.degree, &self.strong, &[point]).stabilizer_generators(point)
            }
            _ => self.strong.clone(),
        }
    }

    fn rebuild_levels(&mut self) {
        self.levels = (0..self.base.len()).map(|i| self.build_level(i)).collect();
    }

    fn build_level(&self, i: usize) -> Level {
        let gens: Vec<usize> = (0..self.strong.len())
            .filter(|&g| self.base[..i].iter().all(|&b| self.strong[g].image(b) == b))
            .collect();
        let root = self.base[i];
        let mut tree = vec![None; self.degree];
        let mut in_orbit = vec![false; self.degree];
        in_orbit[root] = true;
        let mut orbit = vec![root];
        let mut head = 0;
        while head < orbit.len() {
            let x = orbit[head];
            head += 1;
            for &g in &gens {
                let y = self.strong[g].image(x);
                if !in_orbit[y] {
                    in_orbit[y] = true;
                    tree[y] = Some((x, g));
                    orbit.push(y);
                }
            }
        }
        Level { gens, orbit, tree }
    }

    fn in_orbit(&self, level: usize, point: usize) -> bool {
        point == self.base[level] || self.levels[level].tree[point].is_some()
    }

    /// Coset representative mapping the base point of `level` to `point`.
    fn representative(&self, level: usize, point: usize) -> Permutation {
        let mut path = Vec::new();
        let mut x = point;
        while let Some((parent, g)) = self.levels[level].tree[x] {
            path.push(g);
            x = parent;
        }
        let mut rep = Permutation::identity(self.degree);
        for &g in path.iter().rev() {
            rep = rep.then(&self.strong[g]);
        }
        rep
    }

    /// Strips `g` through the levels starting at `from`; returns the residue
    /// and the level where stripping stopped (`levels.len()` if it passed all).
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for level in from..self.levels.len() {
            let beta = g.image(self.base[level]);
            if !self.in_orbit(level, beta) {
                return (g, level);
            }
            g = g.then(&self.representative(level, beta).inverse());
        }
        (g, self.levels.len())
    }

    fn schreier_sims(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        while i >= 0 {
            let lvl = i as usize;
            let mut added_at = None;
            'scan: for oi in 0..self.levels[lvl].orbit.len() {
                let beta = self.levels[lvl].orbit[oi];
                let rep = self.representative(lvl, beta);
                for gi in 0..self.levels[lvl].gens.len() {
                    let s = self.levels[lvl].gens[gi];
                    let image = self.strong[s].image(beta);
                    let schreier = rep.then(&self.strong[s]).then(&self.representative(lvl, image).inverse());
                    let (h, j) = self.sift(schreier, lvl + 1);
                    if !h.is_identity() {
                        if j == self.levels.len() {
                            let p = first_moved(&h).unwrap();
                            self.base.push(p);
                        }
                        self.strong.push(h);
                        self.rebuild_levels();
                        added_at = Some(j);
                        break 'scan;
                    }
                }
            }
            match added_at {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
    }
}

fn first_moved(g: &Permutation) -> Option<usize> {
    (0..g.degree()).find(|&x| g.image(x) != x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership() {
        let c = Permutation::new(vec![1, 2, 3, 4, 0]).unwrap();
        let chain = StabilizerChain::new(5, std::slice::from_ref(&c));
        assert_eq!(chain.order(), BigUint::from(5u32));
        assert!(chain.contains(&c.then(&c)));
        assert!(!chain.contains(&Permutation::new(vec![1, 0, 2, 3, 4]).unwrap()));
    }

    #[test]
    fn symmetric_and_alternating() {
        let t = Permutation::from_cycles(5, &[vec![0, 1]]).unwrap();
        let c = Permutation::from_cycles(5, &[vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(StabilizerChain::new(5, &[t, c]).order(), BigUint::from(120u32));
        let a = Permutation::from_cycles(5, &[vec![0, 1, 2]]).unwrap();
        let b = Permutation::from_cycles(5, &[vec![2, 3, 4]]).unwrap();
        assert_eq!(StabilizerChain::new(5, &[a, b]).order(), BigUint::from(60u32));
    }

    #[test]
    fn stabilizer_of_non_base_point() {
        let c = Permutation::new(vec![1, 2, 3, 0]).unwrap();
        let r = Permutation::new(vec![0, 3, 2, 1]).unwrap();
        let chain = StabilizerChain::new(4, &[c, r]);
        assert_eq!(chain.order(), BigUint::from(8u32));
        let stab = chain.stabilizer_generators(2);
        assert!(stab.iter().all(|g| g.image(2) == 2));
        assert_eq!(StabilizerChain::new(4, &stab).order(), BigUint::from(2u32));
    }
}
