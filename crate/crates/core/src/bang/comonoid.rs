//! The commutative comonoid structure of the truncated exponential.
//!
//! Contraction is implemented directly from the projection equation (the
//! `(p, q)` block of the contracted element is the split of the degree
//! `p + q` component), with the section-family display kept as an
//! independent oracle. Digging and store have no closed componentwise
//! form in the source material; they are built degree by degree from the
//! comonoid-morphism equations, which determine them uniquely, and are
//! cross-checked on promoted points where both have known values.

use super::basis::{MsetBasis, SymComponent};
use super::element::{BangError, TruncatedBang};
use super::maps::{extract_d, rho, theta_components};
use crate::bang::analytic::AnalyticMap;
use crate::convex::CVec;
use crate::rat::{multinomial, one, zero, Rat};
use num_traits::Zero;

/// A `(p, q)` block of an element of a tensor of two exponentials:
/// coefficients indexed by pairs of multisets over the two alphabets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairComponent {
    pub left_alphabet: usize,
    pub right_alphabet: usize,
    pub left_degree: usize,
    pub right_degree: usize,
    /// `coeffs[left mset][right mset]`
    pub coeffs: Vec<Vec<Rat>>,
}

impl PairComponent {
    pub fn zero(la: usize, ra: usize, p: usize, q: usize) -> Self {
        let rows = MsetBasis::get(la, p).len();
        let cols = MsetBasis::get(ra, q).len();
        PairComponent {
            left_alphabet: la,
            right_alphabet: ra,
            left_degree: p,
            right_degree: q,
            coeffs: vec![vec![zero(); cols]; rows],
        }
    }

    /// Outer product of two aggregated components.
    pub fn outer(left: &SymComponent, right: &SymComponent) -> Self {
        let mut out = PairComponent::zero(
            left.alphabet,
            right.alphabet,
            left.degree,
            right.degree,
        );
        for (i, a) in left.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in right.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i][j] = a.clone() * b;
                }
            }
        }
        out
    }

    pub fn map_left(&self, new_alphabet: usize, t: &[Vec<Rat>]) -> Self {
        let rows = MsetBasis::get(new_alphabet, self.left_degree).len();
        let mut out = PairComponent {
            left_alphabet: new_alphabet,
            right_alphabet: self.right_alphabet,
            left_degree: self.left_degree,
            right_degree: self.right_degree,
            coeffs: vec![vec![zero(); self.coeffs[0].len()]; rows],
        };
        for j in 0..self.coeffs[0].len() {
            let col = SymComponent {
                alphabet: self.left_alphabet,
                degree: self.left_degree,
                coeffs: self.coeffs.iter().map(|r| r[j].clone()).collect(),
            };
            let mapped = col.apply_slotwise(new_alphabet, t);
            for (i, v) in mapped.coeffs.into_iter().enumerate() {
                out.coeffs[i][j] = v;
            }
        }
        out
    }

    pub fn map_right(&self, new_alphabet: usize, t: &[Vec<Rat>]) -> Self {
        let cols = MsetBasis::get(new_alphabet, self.right_degree).len();
        let mut out = PairComponent {
            left_alphabet: self.left_alphabet,
            right_alphabet: new_alphabet,
            left_degree: self.left_degree,
            right_degree: self.right_degree,
            coeffs: vec![vec![zero(); cols]; self.coeffs.len()],
        };
        for (i, row) in self.coeffs.iter().enumerate() {
            let comp = SymComponent {
                alphabet: self.right_alphabet,
                degree: self.right_degree,
                coeffs: row.clone(),
            };
            let mapped = comp.apply_slotwise(new_alphabet, t);
            out.coeffs[i] = mapped.coeffs;
        }
        out
    }
}

fn perm(mset: &[u32]) -> Rat {
    Rat::from_integer(multinomial(mset))
}

fn mset_union(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// The `(p, q)` block of the contraction: the symmetric split of the
/// degree `p + q` component, weighted by the ratio of tuple counts.
pub fn cont_pair(b: &TruncatedBang, p: usize, q: usize) -> Result<PairComponent, BangError> {
    let c = b.component(p + q)?;
    let alphabet = b.alphabet;
    let basis_p = MsetBasis::get(alphabet, p);
    let basis_q = MsetBasis::get(alphabet, q);
    let basis_pq = MsetBasis::get(alphabet, p + q);
    let mut out = PairComponent::zero(alphabet, alphabet, p, q);
    for (i, mu) in basis_p.msets.iter().enumerate() {
        for (j, nu) in basis_q.msets.iter().enumerate() {
            let merged = mset_union(mu, nu);
            let k = basis_pq.position(&merged);
            if c.coeffs[k].is_zero() {
                continue;
            }
            out.coeffs[i][j] =
                c.coeffs[k].clone() * perm(mu) * perm(nu) / perm(&merged);
        }
    }
    Ok(out)
}

/// Counit law `(weak (x) id) . cont = id`, read off the `(0, n)` block.
pub fn cont_counit_holds(b: &TruncatedBang) -> bool {
    (0..=b.truncation()).all(|n| {
        let block = cont_pair(b, 0, n).unwrap();
        block.coeffs[0] == b.component(n).unwrap().coeffs
    })
}

/// Cocommutativity: the `(p, q)` block is the transpose of `(q, p)`.
pub fn cont_cocommutative(b: &TruncatedBang) -> bool {
    let n = b.truncation();
    for p in 0..=n {
        for q in 0..=(n - p) {
            let ab = cont_pair(b, p, q).unwrap();
            let ba = cont_pair(b, q, p).unwrap();
            for (i, row) in ab.coeffs.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if *v != ba.coeffs[j][i] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Coassociativity through triple blocks: both bracketings of the double
/// split give `c[union] * perm(mu1) perm(mu2) perm(mu3) / perm(union)`.
pub fn cont_coassociative(b: &TruncatedBang, p: usize, q: usize, r: usize) -> Result<bool, BangError> {
    let alphabet = b.alphabet;
    let c = b.component(p + q + r)?;
    let basis_p = MsetBasis::get(alphabet, p);
    let basis_q = MsetBasis::get(alphabet, q);
    let basis_r = MsetBasis::get(alphabet, r);
    let basis_all = MsetBasis::get(alphabet, p + q + r);
    let basis_pq = MsetBasis::get(alphabet, p + q);
    let basis_qr = MsetBasis::get(alphabet, q + r);
    for (i, m1) in basis_p.msets.iter().enumerate() {
        for (j, m2) in basis_q.msets.iter().enumerate() {
            for (k, m3) in basis_r.msets.iter().enumerate() {
                let _ = (i, j, k);
                let u12 = mset_union(m1, m2);
                let u23 = mset_union(m2, m3);
                let all = mset_union(&u12, m3);
                let base = c.coeffs[basis_all.position(&all)].clone();
                // (cont (x) id) . cont: split (p+q, r) then (p, q)
                let left = base.clone() * perm(&u12) * perm(m3) / perm(&all)
                    * perm(m1)
                    * perm(m2)
                    / perm(&u12);
                // (id (x) cont) . cont: split (p, q+r) then (q, r)
                let right = base * perm(m1) * perm(&u23) / perm(&all)
                    * perm(m2)
                    * perm(m3)
                    / perm(&u23);
                if left != right {
                    return Ok(false);
                }
                let _ = (basis_pq.len(), basis_qr.len());
            }
        }
    }
    Ok(true)
}

/// Independent oracle for the contraction block: the section-family
/// display `sum over (j, k) of (rho_j theta_j D_jj (x) rho_k theta_k
/// D_kk)` applied to the splits, evaluated at output degrees `(p, q)`.
/// Terms vanish for `j > p` or `k > q`, so the sum is finite.
pub fn cont_pair_oracle(b: &TruncatedBang, p: usize, q: usize) -> Result<PairComponent, BangError> {
    let alphabet = b.alphabet;
    let mut out = PairComponent::zero(alphabet, alphabet, p, q);
    for j in 0..=p {
        for k in 0..=q {
            let split = cont_pair(b, j, k)?;
            // columns of rho_j * K_{j,p} . D_{j,j} over the degree-j basis
            let left_map = bang_section_matrix(alphabet, j, p);
            let right_map = bang_section_matrix(alphabet, k, q);
            // apply left_map to the left index and right_map to the right
            for (li, lrow) in left_map.iter().enumerate() {
                for (ri, rrow) in right_map.iter().enumerate() {
                    // out[li][ri] += sum over (a, b) lrow[a] rrow[b] split[a][b]
                    let mut acc = zero();
                    for (a, la) in lrow.iter().enumerate() {
                        if la.is_zero() {
                            continue;
                        }
                        for (bidx, rb) in rrow.iter().enumerate() {
                            if rb.is_zero() || split.coeffs[a][bidx].is_zero() {
                                continue;
                            }
                            acc += la.clone() * rb * &split.coeffs[a][bidx];
                        }
                    }
                    out.coeffs[li][ri] += acc;
                }
            }
        }
    }
    Ok(out)
}

/// Matrix of `rho_j K_{j,m} D_{j,j}` from degree `j` to degree `m`, in
/// aggregated bases: rows over the target basis, columns source.
fn bang_section_matrix(alphabet: usize, j: usize, m: usize) -> Vec<Vec<Rat>> {
    let src = MsetBasis::get(alphabet, j);
    let dst = MsetBasis::get(alphabet, m);
    let mut matrix = vec![vec![zero(); src.len()]; dst.len()];
    let scale = rho(j);
    for col in 0..src.len() {
        let mut unit = SymComponent::zero(alphabet, j);
        unit.coeffs[col] = one();
        let dd = extract_d(&unit, j);
        let assembled = theta_components(&dd, m);
        let image = assembled[m].scale(&scale);
        for (row, v) in image.coeffs.into_iter().enumerate() {
            matrix[row][col] = v;
        }
    }
    matrix
}

/// Flat coordinates of a truncated exponential: one slot per component
/// entry. These are the letters of the exponential-over-exponential
/// alphabets used by digging.
#[derive(Debug, Clone)]
pub struct BangCoords {
    pub alphabet: usize,
    pub trunc: usize,
    offsets: Vec<usize>,
    pub total: usize,
}

impl BangCoords {
    pub fn new(alphabet: usize, trunc: usize) -> Self {
        let mut offsets = Vec::with_capacity(trunc + 2);
        let mut total = 0;
        for n in 0..=trunc {
            offsets.push(total);
            total += MsetBasis::get(alphabet, n).len();
        }
        offsets.push(total);
        BangCoords { alphabet, trunc, offsets, total }
    }

    pub fn coord(&self, degree: usize, mset_index: usize) -> usize {
        self.offsets[degree] + mset_index
    }

    pub fn decode(&self, coord: usize) -> (usize, usize) {
        let degree = (0..=self.trunc).find(|&n| coord < self.offsets[n + 1]).unwrap();
        (degree, coord - self.offsets[degree])
    }

    pub fn flatten(&self, b: &TruncatedBang) -> Vec<Rat> {
        assert_eq!(b.alphabet, self.alphabet);
        assert!(b.truncation() >= self.trunc);
        let mut out = Vec::with_capacity(self.total);
        for n in 0..=self.trunc {
            out.extend(b.component(n).unwrap().coeffs.iter().cloned());
        }
        out
    }
}

/// Degree-indexed matrices of the digging map, built by the recursion
/// `split(dig_{m+1}) = (dig_m (x) dig_1) . cont`, which is forced by the
/// comonoid-morphism equations together with `der . dig = id`.
///
/// The output lives over a letter alphabet of exponential coordinates
/// capped at `letter_trunc`; filling an output of degree `m` reads input
/// coordinates up to degree `letter_trunc * m`, so the input coordinate
/// space is that much deeper. Callers that push the result through a map
/// of bounded degree can cap the letters accordingly.
pub struct DigMachine {
    pub input_coords: BangCoords,
    pub letter_coords: BangCoords,
    /// `matrices[m]`: rows over the size-`m` multisets of the letter
    /// alphabet (capped coordinates plus star), columns over the input
    /// coordinates.
    pub matrices: Vec<Vec<Vec<Rat>>>,
}

impl DigMachine {
    pub fn new(alphabet: usize, letter_trunc: usize, out_degree: usize) -> Self {
        let input_coords = BangCoords::new(alphabet, letter_trunc * out_degree.max(1));
        let letter_coords = BangCoords::new(alphabet, letter_trunc);
        let letters = letter_coords.total + 1; // star last
        let mut matrices: Vec<Vec<Vec<Rat>>> = Vec::with_capacity(out_degree + 1);
        // degree 0: the weakening coordinate
        matrices.push(vec![unit_row(input_coords.total, input_coords.coord(0, 0))]);
        if out_degree >= 1 {
            let basis1 = MsetBasis::get(letters, 1);
            let mut m1 = vec![vec![zero(); input_coords.total]; basis1.len()];
            for (row, mset) in basis1.msets.iter().enumerate() {
                let letter = mset.iter().position(|&c| c == 1).unwrap();
                if letter == letter_coords.total {
                    m1[row][input_coords.coord(0, 0)] = one();
                } else {
                    let (p, mu) = letter_coords.decode(letter);
                    m1[row][input_coords.coord(p, mu)] = one();
                }
            }
            matrices.push(m1);
        }
        for m in 1..out_degree {
            let next = Self::extend(&input_coords, &letter_coords, &matrices[m], m);
            matrices.push(next);
        }
        DigMachine { input_coords, letter_coords, matrices }
    }

    fn extend(
        input: &BangCoords,
        letter_coords: &BangCoords,
        dm: &[Vec<Rat>],
        m: usize,
    ) -> Vec<Vec<Rat>> {
        let letters = letter_coords.total + 1;
        let dst = MsetBasis::get(letters, m + 1);
        let src_m = MsetBasis::get(letters, m);
        let alphabet = input.alphabet;
        let mut out = vec![vec![zero(); input.total]; dst.len()];
        for (row, mset) in dst.msets.iter().enumerate() {
            let letter = mset.iter().position(|&c| c > 0).unwrap();
            let mut reduced = mset.clone();
            reduced[letter] -= 1;
            let factor = perm(mset) / perm(&reduced);
            let nu_row = src_m.position(&reduced);
            // the degree-one factor contributes a single coordinate
            let (q, mu2) = if letter == letter_coords.total {
                (0usize, vec![0u32; alphabet])
            } else {
                let (q, mu2_idx) = letter_coords.decode(letter);
                (q, MsetBasis::get(alphabet, q).msets[mu2_idx].clone())
            };
            for (target, v) in out[row].iter_mut().enumerate() {
                let (n, mu_idx) = input.decode(target);
                if q > n {
                    continue;
                }
                let mu = MsetBasis::get(alphabet, n).msets[mu_idx].clone();
                if mu.iter().zip(mu2.iter()).any(|(a, b)| a < b) {
                    continue;
                }
                let p = n - q;
                let mu1: Vec<u32> = mu.iter().zip(mu2.iter()).map(|(a, b)| a - b).collect();
                let mu1_idx = MsetBasis::get(alphabet, p).position(&mu1);
                let c1 = input.coord(p, mu1_idx);
                if dm[nu_row][c1].is_zero() {
                    continue;
                }
                let ratio = perm(&mu1) * perm(&mu2) / perm(&mu);
                *v = dm[nu_row][c1].clone() * ratio * factor.clone();
            }
        }
        out
    }

    /// Letter alphabet size (capped coordinates plus the star).
    pub fn letters(&self) -> usize {
        self.letter_coords.total + 1
    }

    /// The degree-`m` component of the dug element, over the letter
    /// alphabet. The input must be truncated at least as deep as the
    /// machine's input coordinates.
    pub fn dig_component(&self, b: &TruncatedBang, m: usize) -> SymComponent {
        let flat = self.input_coords.flatten(b);
        let rows = &self.matrices[m];
        let mut out = SymComponent::zero(self.letters(), m);
        for (row, row_coeffs) in rows.iter().enumerate() {
            let mut acc = zero();
            for (c, w) in row_coeffs.iter().enumerate() {
                if !w.is_zero() {
                    acc += w.clone() * &flat[c];
                }
            }
            out.coeffs[row] = acc;
        }
        out
    }
}

fn unit_row(len: usize, at: usize) -> Vec<Rat> {
    let mut row = vec![zero(); len];
    row[at] = one();
    row
}

/// Dereliction after digging: the letter part of the degree-one dug
/// component, reassembled as a truncated element.
pub fn der_after_dig(machine: &DigMachine, b: &TruncatedBang) -> TruncatedBang {
    let c1 = machine.dig_component(b, 1);
    let coords = &machine.letter_coords;
    let mut comps = Vec::new();
    for n in 0..=coords.trunc {
        let basis = MsetBasis::get(coords.alphabet, n);
        let mut comp = SymComponent::zero(coords.alphabet, n);
        for i in 0..basis.len() {
            comp.coeffs[i] = c1.coeffs[coords.coord(n, i)].clone();
        }
        comps.push(comp);
    }
    TruncatedBang::new(coords.alphabet, comps).expect("derelicted dig is compatible")
}

/// Ambient matrix of the linear action of an analytic map on exponential
/// coordinates: column `(n, mu)` is the degree-`n` term at `mu` when
/// `mu` is star-free, and zero otherwise.
pub fn ambient_matrix(f: &AnalyticMap, coords: &BangCoords) -> Vec<Vec<Rat>> {
    assert_eq!(coords.alphabet, f.source_dim + 1);
    assert!(coords.trunc <= f.trunc);
    let mut out = vec![vec![zero(); coords.total]; f.target_dim];
    for c in 0..coords.total {
        let (n, mu_idx) = coords.decode(c);
        let full = MsetBasis::get(coords.alphabet, n);
        let mset = &full.msets[mu_idx];
        if mset[coords.alphabet - 1] != 0 {
            continue;
        }
        let star_free: Vec<u32> = mset[..coords.alphabet - 1].to_vec();
        let sf_idx = MsetBasis::get(f.source_dim, n).position(&star_free);
        for (y, row) in out.iter_mut().enumerate() {
            row[c] = f.terms[n][y][sf_idx].clone();
        }
    }
    out
}

/// Pushes an element through `!f . dig`: each dug component is mapped
/// slotwise by "apply `f` on coordinates, keep the star". Letters are
/// capped at the effective degree of `f` (deeper ones die through `f`),
/// which bounds how deep the input must be truncated: degree `m` of the
/// output reads the input up to degree `effective_degree(f) * m`. The
/// result is a truncated element of the exponential over the target
/// web; projection compatibility is re-checked on construction.
pub fn push_dig(
    f: &AnalyticMap,
    b: &TruncatedBang,
    out_trunc: usize,
) -> Result<TruncatedBang, BangError> {
    let letter_trunc = effective_degree(f);
    let needed = letter_trunc * out_trunc.max(1);
    if b.truncation() < needed {
        return Err(BangError::DegreeTooLow { needed, have: b.truncation() });
    }
    let machine = DigMachine::new(b.alphabet, letter_trunc, out_trunc);
    let amb = ambient_matrix(f, &machine.letter_coords);
    let target_alphabet = f.target_dim + 1;
    // letter map: coordinates through f, star to star
    let mut letter_map = vec![vec![zero(); machine.letters()]; target_alphabet];
    for c in 0..machine.letter_coords.total {
        for y in 0..f.target_dim {
            letter_map[y][c] = amb[y][c].clone();
        }
    }
    letter_map[target_alphabet - 1][machine.letters() - 1] = one();
    let comps = (0..=out_trunc)
        .map(|m| machine.dig_component(b, m).apply_slotwise(target_alphabet, &letter_map))
        .collect();
    TruncatedBang::new(target_alphabet, comps)
}

/// Largest degree with a nonzero term matrix.
pub fn effective_degree(f: &AnalyticMap) -> usize {
    (0..=f.trunc)
        .rev()
        .find(|&n| f.terms[n].iter().any(|row| row.iter().any(|c| !c.is_zero())))
        .unwrap_or(0)
}

/// Kleisli composition applied to an element: `g << f` evaluated at `b`
/// is `g` applied to `!f (dig b)`.
pub fn kleisli_apply(
    g: &AnalyticMap,
    f: &AnalyticMap,
    b: &TruncatedBang,
) -> Result<CVec, BangError> {
    let pushed = push_dig(f, b, effective_degree(g))?;
    g.apply_bang(&pushed)
}

/// The Kleisli composite as an analytic map, with coefficients recovered
/// degree by degree through the section embedding. This runs the full
/// `dig` path, so it is the honest data-level composition.
pub fn kleisli_compose(
    g: &AnalyticMap,
    f: &AnalyticMap,
    trunc: usize,
) -> Result<AnalyticMap, BangError> {
    assert_eq!(f.target_dim, g.source_dim);
    let depth = (effective_degree(f) * effective_degree(g)).max(trunc).max(1);
    let mut out = AnalyticMap::zero(f.source_dim, g.target_dim, trunc);
    for n in 0..=trunc {
        let basis = MsetBasis::get(f.source_dim, n);
        let scale = rho(n)
            * Rat::new(crate::rat::self_power(n), crate::rat::factorial(n));
        let mut matrix = vec![vec![zero(); basis.len()]; g.target_dim];
        for col in 0..basis.len() {
            let mut unit = SymComponent::zero(f.source_dim, n);
            unit.coeffs[col] = one();
            let embedded = super::maps::sec_n(&unit, n);
            let assembled = TruncatedBang::theta(&embedded, depth, n)?;
            let img = kleisli_apply(g, f, &assembled)?;
            for (y, row) in matrix.iter_mut().enumerate() {
                row[col] = img.get(y).clone() * scale.clone();
            }
        }
        out.terms[n] = matrix;
    }
    Ok(out)
}

/// Joint coordinates for a tensor pair of exponentials.
#[derive(Debug, Clone)]
pub struct StoreMachine {
    pub left: BangCoords,
    pub right: BangCoords,
    /// output letter alphabet: left object labels, right object labels, star
    pub out_alphabet: usize,
    /// `matrices[m]`: rows over size-`m` multisets of the output
    /// alphabet, columns over joint coordinates `left * right`.
    pub matrices: Vec<Vec<Vec<Rat>>>,
}

impl StoreMachine {
    pub fn new(left_alphabet: usize, right_alphabet: usize, trunc: usize, out_degree: usize) -> Self {
        let left = BangCoords::new(left_alphabet, trunc);
        let right = BangCoords::new(right_alphabet, trunc);
        let dim1 = left_alphabet - 1;
        let dim2 = right_alphabet - 1;
        let out_alphabet = dim1 + dim2 + 1;
        let joint = left.total * right.total;
        let mut matrices: Vec<Vec<Vec<Rat>>> = Vec::new();
        // degree 0: product of the two weakening coordinates
        matrices.push(vec![unit_row(joint, left.coord(0, 0) * right.total + right.coord(0, 0))]);
        if out_degree >= 1 {
            let basis1 = MsetBasis::get(out_alphabet, 1);
            let mut m1 = vec![vec![zero(); joint]; basis1.len()];
            for (row, mset) in basis1.msets.iter().enumerate() {
                let letter = mset.iter().position(|&c| c == 1).unwrap();
                let weak_l = left.coord(0, 0);
                let weak_r = right.coord(0, 0);
                if letter < dim1 {
                    let mut single = vec![0u32; left_alphabet];
                    single[letter] = 1;
                    let c1 = left.coord(1, MsetBasis::get(left_alphabet, 1).position(&single));
                    m1[row][c1 * right.total + weak_r] = one();
                } else if letter < dim1 + dim2 {
                    let mut single = vec![0u32; right_alphabet];
                    single[letter - dim1] = 1;
                    let c2 = right.coord(1, MsetBasis::get(right_alphabet, 1).position(&single));
                    m1[row][weak_l * right.total + c2] = one();
                } else {
                    m1[row][weak_l * right.total + weak_r] = one();
                }
            }
            matrices.push(m1);
        }
        for m in 1..out_degree {
            let next = Self::extend(&left, &right, out_alphabet, &matrices[m], &matrices[1]);
            matrices.push(next);
        }
        StoreMachine { left, right, out_alphabet, matrices }
    }

    fn extend(
        left: &BangCoords,
        right: &BangCoords,
        out_alphabet: usize,
        sm: &[Vec<Rat>],
        s1: &[Vec<Rat>],
    ) -> Vec<Vec<Rat>> {
        let m = (0..)
            .find(|&deg| MsetBasis::get(out_alphabet, deg).len() == sm.len())
            .unwrap();
        let dst = MsetBasis::get(out_alphabet, m + 1);
        let src_m = MsetBasis::get(out_alphabet, m);
        let joint = left.total * right.total;
        let mut out = vec![vec![zero(); joint]; dst.len()];
        for (row, mset) in dst.msets.iter().enumerate() {
            let letter = mset.iter().position(|&c| c > 0).unwrap();
            let mut reduced = mset.clone();
            reduced[letter] -= 1;
            let factor = perm(mset) / perm(&reduced);
            let nu_row = src_m.position(&reduced);
            let mut single = vec![0u32; out_alphabet];
            single[letter] = 1;
            let s1_row = &s1[MsetBasis::get(out_alphabet, 1).position(&single)];
            for (target, v) in out[row].iter_mut().enumerate() {
                let (cl, cr) = (target / right.total, target % right.total);
                let (n1, mu1_idx) = left.decode(cl);
                let (n2, mu2_idx) = right.decode(cr);
                let mu1 = MsetBasis::get(left.alphabet, n1).msets[mu1_idx].clone();
                let mu2 = MsetBasis::get(right.alphabet, n2).msets[mu2_idx].clone();
                let mut acc = zero();
                for (j2, w2) in s1_row.iter().enumerate() {
                    if w2.is_zero() {
                        continue;
                    }
                    let (d1, d2) = (j2 / right.total, j2 % right.total);
                    let (q1, k1_idx) = left.decode(d1);
                    let (q2, k2_idx) = right.decode(d2);
                    if q1 > n1 || q2 > n2 {
                        continue;
                    }
                    let k1 = &MsetBasis::get(left.alphabet, q1).msets[k1_idx];
                    let k2 = &MsetBasis::get(right.alphabet, q2).msets[k2_idx];
                    if mu1.iter().zip(k1.iter()).any(|(a, b)| a < b)
                        || mu2.iter().zip(k2.iter()).any(|(a, b)| a < b)
                    {
                        continue;
                    }
                    let r1: Vec<u32> = mu1.iter().zip(k1.iter()).map(|(a, b)| a - b).collect();
                    let r2: Vec<u32> = mu2.iter().zip(k2.iter()).map(|(a, b)| a - b).collect();
                    let p1 = n1 - q1;
                    let p2 = n2 - q2;
                    let c1 = left.coord(p1, MsetBasis::get(left.alphabet, p1).position(&r1));
                    let c2 = right.coord(p2, MsetBasis::get(right.alphabet, p2).position(&r2));
                    let sm_val = &sm[nu_row][c1 * right.total + c2];
                    if sm_val.is_zero() {
                        continue;
                    }
                    let ratio1 = perm(&r1) * perm(k1) / perm(&mu1);
                    let ratio2 = perm(&r2) * perm(k2) / perm(&mu2);
                    acc += sm_val.clone() * w2 * ratio1 * ratio2;
                }
                *v = acc * factor.clone();
            }
        }
        out
    }

    /// Degree-`m` component of the stored pair.
    pub fn store_component(&self, a: &TruncatedBang, b: &TruncatedBang, m: usize) -> SymComponent {
        let fa = self.left.flatten(a);
        let fb = self.right.flatten(b);
        let mut out = SymComponent::zero(self.out_alphabet, m);
        for (row, row_coeffs) in self.matrices[m].iter().enumerate() {
            let mut acc = zero();
            for (j, w) in row_coeffs.iter().enumerate() {
                if w.is_zero() {
                    continue;
                }
                let (cl, cr) = (j / self.right.total, j % self.right.total);
                if fa[cl].is_zero() || fb[cr].is_zero() {
                    continue;
                }
                acc += w.clone() * &fa[cl] * &fb[cr];
            }
            out.coeffs[row] = acc;
        }
        out
    }

    pub fn store(&self, a: &TruncatedBang, b: &TruncatedBang, trunc: usize) -> Result<TruncatedBang, BangError> {
        let comps = (0..=trunc).map(|m| self.store_component(a, b, m)).collect();
        TruncatedBang::new(self.out_alphabet, comps)
    }
}

/// Inverse of store: contraction followed by slotwise projections onto
/// the two halves of the product web. Returns the `(p, q)` blocks.
pub fn unstore_pair(
    c: &TruncatedBang,
    dim1: usize,
    dim2: usize,
    p: usize,
    q: usize,
) -> Result<PairComponent, BangError> {
    assert_eq!(c.alphabet, dim1 + dim2 + 1);
    let block = cont_pair(c, p, q)?;
    // left: keep the first web and the star
    let mut t1 = vec![vec![zero(); c.alphabet]; dim1 + 1];
    for (l, row) in t1.iter_mut().enumerate().take(dim1) {
        row[l] = one();
    }
    t1[dim1][c.alphabet - 1] = one();
    // right: keep the second web and the star
    let mut t2 = vec![vec![zero(); c.alphabet]; dim2 + 1];
    for l in 0..dim2 {
        t2[l][dim1 + l] = one();
    }
    t2[dim2][c.alphabet - 1] = one();
    Ok(block.map_left(dim1 + 1, &t1).map_right(dim2 + 1, &t2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bang::element::nabla;
    use crate::convex::MultiMap;
    use crate::rat::{int, rat};
    use crate::seed::SeedStream;

    fn point(vals: &[(i64, i64)]) -> CVec {
        CVec::new(vals.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    fn random_bang(stream: &mut SeedStream, trunc: usize) -> TruncatedBang {
        // random mixture of promoted points over a 2-dim web
        let x = point(&[((stream.next_u64() % 3) as i64, 4), ((stream.next_u64() % 2) as i64, 4)]);
        let y = point(&[((stream.next_u64() % 2) as i64, 4), ((stream.next_u64() % 3) as i64, 4)]);
        nabla(&x, trunc)
            .scale(&rat(1, 2))
            .add(&nabla(&y, trunc).scale(&rat(1, 3)))
    }

    #[test]
    fn cont_on_promotions_is_the_tensor_square() {
        let x = point(&[(1, 2), (1, 3)]);
        let b = nabla(&x, 4);
        for p in 0..=2usize {
            for q in 0..=2usize {
                let block = cont_pair(&b, p, q).unwrap();
                let expect = PairComponent::outer(
                    b.component(p).unwrap(),
                    b.component(q).unwrap(),
                );
                assert_eq!(block, expect, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn cont_counit_and_cocommutativity() {
        let mut stream = SeedStream::root(31);
        for _ in 0..5 {
            let b = random_bang(&mut stream, 3);
            assert!(cont_counit_holds(&b));
            assert!(cont_cocommutative(&b));
        }
    }

    #[test]
    fn cont_coassociativity_small_degrees() {
        let mut stream = SeedStream::root(32);
        let b = random_bang(&mut stream, 3);
        for (p, q, r) in [(1, 1, 1), (0, 1, 2), (2, 1, 0)] {
            assert!(cont_coassociative(&b, p, q, r).unwrap());
        }
    }

    #[test]
    fn cont_matches_the_section_family_oracle() {
        let mut stream = SeedStream::root(33);
        for _ in 0..3 {
            let b = random_bang(&mut stream, 3);
            for (p, q) in [(0, 0), (1, 0), (1, 1), (2, 1), (1, 2), (3, 0)] {
                let direct = cont_pair(&b, p, q).unwrap();
                let oracle = cont_pair_oracle(&b, p, q).unwrap();
                assert_eq!(direct, oracle, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn dig_of_promotion_is_promotion_of_promotion() {
        let x = point(&[(1, 2), (1, 4)]);
        // letters capped at degree 2, output degree up to 3: the input
        // must be truncated at 6
        let machine = DigMachine::new(3, 2, 3);
        let b = nabla(&x, 6);
        // nabla(b) over the letter alphabet: coordinates of b, star = 1
        let shallow = nabla(&x, 2);
        let mut letter_vec: Vec<Rat> = machine.letter_coords.flatten(&shallow);
        letter_vec.push(int(1));
        for m in 0..=3usize {
            let direct = machine.dig_component(&b, m);
            let factors: Vec<&[Rat]> = (0..m).map(|_| letter_vec.as_slice()).collect();
            let expect = SymComponent::pure_product(machine.letters(), &factors);
            assert_eq!(direct, expect, "m={m}");
        }
    }

    #[test]
    fn dereliction_after_digging_is_the_identity() {
        let mut stream = SeedStream::root(34);
        for _ in 0..4 {
            let b = random_bang(&mut stream, 3);
            let machine = DigMachine::new(3, 3, 1);
            assert_eq!(der_after_dig(&machine, &b), b);
        }
    }

    #[test]
    fn push_dig_on_promotions_promotes_the_image() {
        // linear f: the pushed element is the promotion of f(x)
        let m = MultiMap::from_fn(vec![2], 2, |i, j| rat(((i[0] + j) % 2) as i64, 2));
        let f = AnalyticMap::from_linear(&m, 3);
        let x = point(&[(1, 3), (1, 5)]);
        let b = nabla(&x, 3);
        let pushed = push_dig(&f, &b, 3).unwrap();
        let expect = nabla(&m.apply(&[&x]), 3);
        assert_eq!(pushed, expect);
    }

    #[test]
    fn push_dig_reports_the_required_depth() {
        // quadratic map pushed to output degree 2 needs input depth 4
        let f =
            AnalyticMap::zero(2, 1, 4).with_term(2, vec![vec![int(0), int(1), int(0)]]);
        let b = nabla(&point(&[(1, 2), (1, 3)]), 3);
        assert_eq!(
            push_dig(&f, &b, 2),
            Err(crate::bang::BangError::DegreeTooLow { needed: 4, have: 3 })
        );
    }

    #[test]
    fn kleisli_agrees_with_composition_for_linear_maps() {
        let mut stream = SeedStream::root(35);
        for _ in 0..3 {
            let m1 = MultiMap::from_fn(vec![2], 2, |i, j| {
                rat((stream.next_u64() % 3) as i64, 4 + (i[0] + j) as i64)
            });
            let m2 = MultiMap::from_fn(vec![2], 2, |i, j| {
                rat((stream.next_u64() % 2) as i64, 3 + (i[0] * j) as i64)
            });
            let f = AnalyticMap::from_linear(&m1, 3);
            let g = AnalyticMap::from_linear(&m2, 3);
            let composed = AnalyticMap::from_linear(&m2.compose1(&m1), 3);
            let via_kleisli = kleisli_compose(&g, &f, 3).unwrap();
            assert_eq!(via_kleisli, composed);
        }
    }

    #[test]
    fn kleisli_on_nonlinear_map_matches_pointwise_composition() {
        // f(x) = x^2, g(y) = 1/2 y + 1/4 on the weight object
        let f = AnalyticMap::zero(1, 1, 4).with_term(2, vec![vec![int(1)]]);
        let g = AnalyticMap::zero(1, 1, 4)
            .with_term(0, vec![vec![rat(1, 4)]])
            .with_term(1, vec![vec![rat(1, 2)]]);
        let h = kleisli_compose(&g, &f, 4).unwrap();
        for num in 0..=4i64 {
            let x = CVec::new(vec![rat(num, 4)]);
            assert_eq!(h.eval(&x), g.eval(&f.eval(&x)), "x = {num}/4");
        }
        // and so does the other composition order: f(g(x))
        let h2 = kleisli_compose(&f, &g, 4).unwrap();
        for num in 0..=4i64 {
            let x = CVec::new(vec![rat(num, 4)]);
            assert_eq!(h2.eval(&x), f.eval(&g.eval(&x)), "x = {num}/4");
        }
    }

    #[test]
    fn store_of_promotions_is_the_promoted_pair() {
        let machine = StoreMachine::new(2, 2, 2, 2);
        let x = point(&[(1, 2)]);
        let y = point(&[(1, 3)]);
        let stored = machine.store(&nabla(&x, 2), &nabla(&y, 2), 2).unwrap();
        let expect = nabla(&CVec::new(vec![rat(1, 2), rat(1, 3)]), 2);
        assert_eq!(stored, expect);
    }

    #[test]
    fn store_with_asymmetric_webs() {
        // two-coordinate left object, one-coordinate right object
        let machine = StoreMachine::new(3, 2, 2, 2);
        let x = point(&[(1, 3), (1, 5)]);
        let y = point(&[(2, 7)]);
        let stored = machine.store(&nabla(&x, 2), &nabla(&y, 2), 2).unwrap();
        let expect = nabla(&CVec::new(vec![rat(1, 3), rat(1, 5), rat(2, 7)]), 2);
        assert_eq!(stored, expect);
        // and the inverse recovers the factors blockwise
        for p in 0..=2usize {
            for q in 0..=(2 - p) {
                let back = unstore_pair(&stored, 2, 1, p, q).unwrap();
                let expect = PairComponent::outer(
                    nabla(&x, 2).component(p).unwrap(),
                    nabla(&y, 2).component(q).unwrap(),
                );
                assert_eq!(back, expect, "p={p} q={q}");
            }
        }
    }

    #[test]
    fn store_then_unstore_is_the_identity_on_pairs() {
        let mut stream = SeedStream::root(36);
        for _ in 0..3 {
            // weighted promotions over two one-dimensional webs
            let a = nabla(&point(&[((stream.next_u64() % 3) as i64, 3)]), 2)
                .scale(&rat(1, 2))
                .add(&nabla(&point(&[((stream.next_u64() % 2) as i64, 2)]), 2).scale(&rat(1, 2)));
            let b = nabla(&point(&[((stream.next_u64() % 4) as i64, 4)]), 2);
            let machine = StoreMachine::new(2, 2, 2, 2);
            let stored = machine.store(&a, &b, 2).unwrap();
            for p in 0..=1usize {
                for q in 0..=(1 - p + 1).min(2 - p) {
                    let back = unstore_pair(&stored, 1, 1, p, q).unwrap();
                    let expect = PairComponent::outer(
                        a.component(p).unwrap(),
                        b.component(q).unwrap(),
                    );
                    assert_eq!(back, expect, "p={p} q={q}");
                }
            }
        }
    }
}
