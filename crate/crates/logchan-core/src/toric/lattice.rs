use alloc::vec::Vec;

use crate::error::{bail, Result};

/// Smallest and largest supported linear size.
pub const MIN_L: usize = 3;
pub const MAX_L: usize = 15;

/// Edge orientation on the square lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    /// From vertex `(r, c)` to `(r, c + 1)`.
    Horizontal,
    /// From vertex `(r, c)` to `(r + 1, c)`.
    Vertical,
}

/// Pauli axis of single-axis noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Z,
}

/// `L x L` periodic square lattice with qubits on edges.
///
/// Edge `h(r, c) = r L + c` and `v(r, c) = L^2 + r L + c`. Vertex and
/// plaquette `(r, c)` both have index `r L + c`; plaquette `(r, c)` has
/// top-left corner at vertex `(r, c)`. Z errors flip stars (vertices), X
/// errors flip plaquettes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusLattice {
    l: usize,
}

impl TorusLattice {
    pub fn new(l: usize) -> Result<Self> {
        if l.is_multiple_of(2) {
            bail!(InvalidArgument, "lattice size must be odd, got {l}");
        }
        if !(MIN_L..=MAX_L).contains(&l) {
            bail!(OutOfRange, "lattice size {l} outside {MIN_L}..={MAX_L}");
        }
        Ok(Self { l })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn n_qubits(&self) -> usize {
        2 * self.l * self.l
    }

    pub fn n_vertices(&self) -> usize {
        self.l * self.l
    }

    #[inline]
    fn wrap(&self, x: isize) -> usize {
        x.rem_euclid(self.l as isize) as usize
    }

    #[inline]
    pub fn h(&self, r: isize, c: isize) -> usize {
        self.wrap(r) * self.l + self.wrap(c)
    }

    #[inline]
    pub fn v(&self, r: isize, c: isize) -> usize {
        self.l * self.l + self.wrap(r) * self.l + self.wrap(c)
    }

    #[inline]
    pub fn vertex(&self, r: isize, c: isize) -> usize {
        self.wrap(r) * self.l + self.wrap(c)
    }

    /// `(row, col)` of a vertex or plaquette index.
    #[inline]
    pub fn vertex_coords(&self, v: usize) -> (usize, usize) {
        (v / self.l, v % self.l)
    }

    /// `(row, col, orientation)` of an edge.
    pub fn edge_coords(&self, e: usize) -> (usize, usize, Orientation) {
        let l2 = self.l * self.l;
        if e < l2 {
            (e / self.l, e % self.l, Orientation::Horizontal)
        } else {
            ((e - l2) / self.l, (e - l2) % self.l, Orientation::Vertical)
        }
    }

    /// The two end vertices of an edge.
    pub fn edge_vertices(&self, e: usize) -> [usize; 2] {
        let (r, c, o) = self.edge_coords(e);
        let (r, c) = (r as isize, c as isize);
        match o {
            Orientation::Horizontal => [self.vertex(r, c), self.vertex(r, c + 1)],
            Orientation::Vertical => [self.vertex(r, c), self.vertex(r + 1, c)],
        }
    }

    /// The two plaquettes bordering an edge.
    pub fn edge_plaquettes(&self, e: usize) -> [usize; 2] {
        let (r, c, o) = self.edge_coords(e);
        let (r, c) = (r as isize, c as isize);
        match o {
            Orientation::Horizontal => [self.vertex(r, c), self.vertex(r - 1, c)],
            Orientation::Vertical => [self.vertex(r, c), self.vertex(r, c - 1)],
        }
    }

    /// Edges meeting at vertex `(r, c)`: right, left, down, up.
    pub fn star(&self, v: usize) -> [usize; 4] {
        let (r, c) = self.vertex_coords(v);
        let (r, c) = (r as isize, c as isize);
        [self.h(r, c), self.h(r, c - 1), self.v(r, c), self.v(r - 1, c)]
    }

    /// Edges around plaquette `(r, c)`: top, bottom, left, right.
    pub fn plaquette(&self, p: usize) -> [usize; 4] {
        let (r, c) = self.vertex_coords(p);
        let (r, c) = (r as isize, c as isize);
        [self.h(r, c), self.h(r + 1, c), self.v(r, c), self.v(r, c + 1)]
    }

    /// Lattice duality `h(r,c) -> v(r-1,c)`, `v(r,c) -> h(r,c-1)`.
    ///
    /// It maps star `(r,c)` onto plaquette `(r-1,c-1)`, the `Z1` string onto
    /// the `X2` string and the `Z2` string onto the `X1` string.
    pub fn dual_edge(&self, e: usize) -> usize {
        let (r, c, o) = self.edge_coords(e);
        let (r, c) = (r as isize, c as isize);
        match o {
            Orientation::Horizontal => self.v(r - 1, c),
            Orientation::Vertical => self.h(r, c - 1),
        }
    }

    /// Inverse of [`Self::dual_edge`].
    pub fn dual_edge_inv(&self, e: usize) -> usize {
        let (r, c, o) = self.edge_coords(e);
        let (r, c) = (r as isize, c as isize);
        match o {
            Orientation::Vertical => self.h(r + 1, c),
            Orientation::Horizontal => self.v(r, c + 1),
        }
    }

    /// Star `(r,c)` corresponds to plaquette `(r-1,c-1)` under the duality.
    pub fn dual_star(&self, v: usize) -> usize {
        let (r, c) = self.vertex_coords(v);
        self.vertex(r as isize - 1, c as isize - 1)
    }

    pub fn dual_plaquette_inv(&self, p: usize) -> usize {
        let (r, c) = self.vertex_coords(p);
        self.vertex(r as isize + 1, c as isize + 1)
    }

    /// Support of `Z1`: the horizontal edges of row 0.
    pub fn z1_support(&self) -> Vec<usize> {
        (0..self.l).map(|c| self.h(0, c as isize)).collect()
    }

    /// Support of `Z2`: the vertical edges of column 0.
    pub fn z2_support(&self) -> Vec<usize> {
        (0..self.l).map(|r| self.v(r as isize, 0)).collect()
    }

    /// Support of `X1`: the horizontal edges of column 0.
    pub fn x1_support(&self) -> Vec<usize> {
        (0..self.l).map(|r| self.h(r as isize, 0)).collect()
    }

    /// Support of `X2`: the vertical edges of row 0.
    pub fn x2_support(&self) -> Vec<usize> {
        (0..self.l).map(|c| self.v(0, c as isize)).collect()
    }

    /// Vertices with odd degree in an edge set (the star defects of a Z
    /// string).
    pub fn boundary(&self, edges: &[usize]) -> Vec<usize> {
        let mut odd = alloc::vec![false; self.n_vertices()];
        for &e in edges {
            for v in self.edge_vertices(e) {
                odd[v] ^= true;
            }
        }
        (0..odd.len()).filter(|&v| odd[v]).collect()
    }

    /// Plaquettes touched an odd number of times (defects of an X string).
    pub fn coboundary(&self, edges: &[usize]) -> Vec<usize> {
        let mut odd = alloc::vec![false; self.n_vertices()];
        for &e in edges {
            for p in self.edge_plaquettes(e) {
                odd[p] ^= true;
            }
        }
        (0..odd.len()).filter(|&p| odd[p]).collect()
    }

    /// Homology class `(z1, z2)` of a Z-type edge set, read as parities of
    /// its overlap with the `X1` and `X2` supports. Linear in the edge set.
    pub fn z_class(&self, edges: &[usize]) -> (bool, bool) {
        let l2 = self.l * self.l;
        let mut z1 = false;
        let mut z2 = false;
        for &e in edges {
            if e < l2 && e % self.l == 0 {
                z1 ^= true;
            }
            if e >= l2 && (e - l2) / self.l == 0 {
                z2 ^= true;
            }
        }
        (z1, z2)
    }

    /// Homology class `(x1, x2)` of an X-type edge set, from its overlap with
    /// the `Z1` and `Z2` supports.
    pub fn x_class(&self, edges: &[usize]) -> (bool, bool) {
        let l2 = self.l * self.l;
        let mut x1 = false;
        let mut x2 = false;
        for &e in edges {
            if e < l2 && e / self.l == 0 {
                x1 ^= true;
            }
            if e >= l2 && (e - l2).is_multiple_of(self.l) {
                x2 ^= true;
            }
        }
        (x1, x2)
    }

    /// Shortest torus distance between two vertices.
    pub fn distance(&self, a: usize, b: usize) -> usize {
        let (ra, ca) = self.vertex_coords(a);
        let (rb, cb) = self.vertex_coords(b);
        let d = |x: usize, y: usize| {
            let t = (x + self.l - y) % self.l;
            t.min(self.l - t)
        };
        d(ra, rb) + d(ca, cb)
    }

    /// Geodesic path from `a` to `b`: horizontal along the row of `a`, then
    /// vertical along the column of `b`. `L` is odd, so each leg has a
    /// unique shortest direction.
    pub fn geodesic(&self, a: usize, b: usize) -> Vec<usize> {
        let (ra, ca) = self.vertex_coords(a);
        let (rb, cb) = self.vertex_coords(b);
        let l = self.l;
        let mut path = Vec::new();
        let (r, mut c) = (ra as isize, ca as isize);
        let dx = (cb + l - ca) % l;
        if dx <= l / 2 {
            for _ in 0..dx {
                path.push(self.h(r, c));
                c += 1;
            }
        } else {
            for _ in 0..l - dx {
                path.push(self.h(r, c - 1));
                c -= 1;
            }
        }
        let mut r = r;
        let dy = (rb + l - ra) % l;
        if dy <= l / 2 {
            for _ in 0..dy {
                path.push(self.v(r, c));
                r += 1;
            }
        } else {
            for _ in 0..l - dy {
                path.push(self.v(r - 1, c));
                r -= 1;
            }
        }
        path
    }
}

/// XOR-reduce an edge multiset into a sorted set.
pub fn xor_edges(n: usize, edges: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut on = alloc::vec![false; n];
    for e in edges {
        on[e] ^= true;
    }
    (0..n).filter(|&e| on[e]).collect()
}
