use alloc::vec;
use alloc::vec::Vec;

use super::geometry::{det, inverse};
use super::{BasisEval, GaussRule, GeometryMap, TensorSpace};
use crate::linalg::{CsrMatrix, SparseSymMatrix, Triplet};
use crate::math::sqrt;
use crate::{Error, Result};

/// Function of the physical point.
pub type ScalarFn<'a> = &'a dyn Fn(&[f64; 3]) -> f64;
/// Function of the physical point and the outward unit normal.
pub type BoundaryFn<'a> = &'a dyn Fn(&[f64; 3], &[f64; 3]) -> f64;

/// Piecewise spline space on the boundary: on each face of `(0,1)^d` the
/// traces of the parent space, with no continuity across faces.
///
/// Faces are ordered `(dir 0, side 0), (dir 0, side 1), (dir 1, side 0), ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpace {
    parent: TensorSpace,
    offsets: Vec<usize>,
}

impl BoundarySpace {
    pub fn new(parent: TensorSpace) -> Self {
        let dims = parent.factor_dims();
        let mut offsets = vec![0];
        for a in 0..dims.len() {
            let face_dim: usize = dims.iter().enumerate().filter(|(b, _)| *b != a).map(|(_, n)| n).product();
            for _ in 0..2 {
                offsets.push(offsets.last().unwrap() + face_dim);
            }
        }
        Self { parent, offsets }
    }

    pub fn parent(&self) -> &TensorSpace {
        &self.parent
    }

    pub fn dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn num_faces(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Index of the trace on face `(dir, side)` of parent function `multi`,
    /// or `None` if that function vanishes on the face.
    pub fn face_index(&self, dir: usize, side: usize, multi: &[usize]) -> Option<usize> {
        let dims = self.parent.factor_dims();
        let bidx = if side == 0 { 0 } else { dims[dir] - 1 };
        if multi[dir] != bidx {
            return None;
        }
        let mut idx = 0;
        for b in (0..dims.len()).rev().filter(|&b| b != dir) {
            idx = idx * dims[b] + multi[b];
        }
        Some(self.offsets[2 * dir + side] + idx)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Need {
    Values,
    Gradients,
    Laplacians,
}

struct PointEval {
    val: Vec<f64>,
    grad: Vec<[f64; 3]>,
    lap: Vec<f64>,
}

struct QPoint {
    w: f64,
    x: [f64; 3],
    normal: [f64; 3],
    spaces: Vec<PointEval>,
}

struct ElementData {
    idx: Vec<Vec<usize>>,
    /// Local multi-indices, needed to identify traces on faces.
    multi: Vec<Vec<[usize; 3]>>,
    points: Vec<QPoint>,
    face: Option<(usize, usize)>,
}

fn multi_indices(ext: &[usize]) -> Vec<[usize; 3]> {
    let total: usize = ext.iter().product();
    (0..total)
        .map(|mut k| {
            let mut m = [0; 3];
            for (d, &e) in ext.iter().enumerate() {
                m[d] = k % e;
                k /= e;
            }
            m
        })
        .collect()
}

/// Element loops for bilinear and linear forms on a polynomial geometry.
///
/// By default every direction uses `p + 1 + deg` Gauss points per element,
/// with `p` the largest degree of the involved spaces and `deg` the degree of
/// `det J` in that direction. Mass-type integrands are then integrated
/// exactly; the surplus covers the rational factors `1 / det J` of
/// derivative terms on curved maps.
#[derive(Debug, Clone)]
pub struct Assembler<'a> {
    geo: &'a GeometryMap,
    fixed_points: Option<usize>,
}

impl<'a> Assembler<'a> {
    pub fn new(geo: &'a GeometryMap) -> Self {
        Self { geo, fixed_points: None }
    }

    /// Uses `q` Gauss points per direction regardless of degree and geometry.
    pub fn with_points(geo: &'a GeometryMap, q: usize) -> Self {
        Self { geo, fixed_points: Some(q.max(1)) }
    }

    pub fn geometry(&self) -> &GeometryMap {
        self.geo
    }

    pub fn points_per_direction(&self, degree: usize) -> Vec<usize> {
        (0..self.geo.dim())
            .map(|a| match self.fixed_points {
                Some(q) => q,
                None => degree + 1 + self.geo.jacobian_determinant().degree_in(a) as usize,
            })
            .collect()
    }

    fn check(&self, spaces: &[&TensorSpace]) -> Result<()> {
        for s in spaces {
            if s.dim_space() != self.geo.dim() {
                return Err(Error::DimensionMismatch { expected: self.geo.dim(), found: s.dim_space() });
            }
            if s.num_elements() != spaces[0].num_elements() {
                return Err(Error::InvalidArgument("spaces must share the mesh"));
            }
        }
        Ok(())
    }

    /// Shared element loop. With `face = Some((dir, side))` the loop runs over
    /// the elements of that face with the outward normal and surface measure.
    fn for_each(
        &self,
        spaces: &[&TensorSpace],
        need: Need,
        face: Option<(usize, usize)>,
        f: &mut dyn FnMut(&ElementData),
    ) -> Result<()> {
        self.check(spaces)?;
        let d = self.geo.dim();
        let nel = spaces[0].num_elements();
        let nd = match need {
            Need::Values => 0,
            Need::Gradients => 1,
            Need::Laplacians => 2,
        };
        let degree = spaces.iter().map(|s| s.max_degree()).max().unwrap_or(1);
        let qdir = self.points_per_direction(degree);

        // Per direction: the element range, and per element the nodes/weights.
        let mut elem_range = Vec::with_capacity(d);
        let mut nodes: Vec<Vec<(Vec<f64>, Vec<f64>)>> = Vec::with_capacity(d);
        for a in 0..d {
            match face {
                Some((fa, side)) if fa == a => {
                    let e = if side == 0 { 0 } else { nel - 1 };
                    elem_range.push((e, e + 1));
                    let mut per = vec![(Vec::new(), Vec::new()); nel];
                    per[e] = (vec![side as f64], vec![1.0]);
                    nodes.push(per);
                }
                _ => {
                    elem_range.push((0, nel));
                    let rule = GaussRule::new(qdir[a]);
                    let n = nel as f64;
                    nodes.push((0..nel).map(|e| rule.on_interval(e as f64 / n, (e + 1) as f64 / n)).collect());
                }
            }
        }

        // tables[s][a][e][t]
        let mut tables: Vec<Vec<Vec<Vec<BasisEval>>>> = Vec::with_capacity(spaces.len());
        for s in spaces {
            let mut per_dir = Vec::with_capacity(d);
            for a in 0..d {
                let fac = &s.factors()[a];
                let mut per_el = vec![Vec::new(); nel];
                for (e, slot) in per_el.iter_mut().enumerate().take(elem_range[a].1).skip(elem_range[a].0) {
                    *slot = nodes[a][e].0.iter().map(|&x| fac.eval_in_element(e, x, nd)).collect::<Result<_>>()?;
                }
                per_dir.push(per_el);
            }
            tables.push(per_dir);
        }

        let local_ext: Vec<Vec<usize>> =
            spaces.iter().map(|s| s.factors().iter().map(|f| f.degree() + 1).collect()).collect();
        let local_multi: Vec<Vec<[usize; 3]>> = local_ext.iter().map(|e| multi_indices(e)).collect();

        let el_ext: Vec<usize> = elem_range.iter().map(|(lo, hi)| hi - lo).collect();
        for em in multi_indices(&el_ext) {
            let e: Vec<usize> = (0..d).map(|a| elem_range[a].0 + em[a]).collect();
            let qext: Vec<usize> = (0..d).map(|a| nodes[a][e[a]].0.len()).collect();
            let mut data = ElementData { idx: Vec::new(), multi: Vec::new(), points: Vec::new(), face };
            for (si, s) in spaces.iter().enumerate() {
                let firsts: Vec<usize> = (0..d).map(|a| tables[si][a][e[a]][0].first).collect();
                let mut idx = Vec::with_capacity(local_multi[si].len());
                let mut multi = Vec::with_capacity(local_multi[si].len());
                for lm in &local_multi[si] {
                    let mut g = [0usize; 3];
                    for a in 0..d {
                        g[a] = firsts[a] + lm[a];
                    }
                    idx.push(s.index(&g[..d]));
                    multi.push(g);
                }
                data.idx.push(idx);
                data.multi.push(multi);
            }
            for qm in multi_indices(&qext) {
                let mut xi = [0.0; 3];
                let mut w = 1.0;
                for a in 0..d {
                    xi[a] = nodes[a][e[a]].0[qm[a]];
                    w *= nodes[a][e[a]].1[qm[a]];
                }
                let ge = self.geo.eval(&xi);
                let detj = det(&ge.jac, d);
                if !(detj > 0.0) {
                    return Err(Error::DegenerateGeometry { det: detj });
                }
                let jinv = inverse(&ge.jac, d);
                let mut normal = [0.0; 3];
                let measure = match face {
                    None => detj,
                    Some((fa, side)) => {
                        let sgn = if side == 0 { -1.0 } else { 1.0 };
                        let mut m = [0.0; 3];
                        for k in 0..d {
                            m[k] = sgn * jinv[fa][k];
                        }
                        let len = sqrt(m.iter().map(|v| v * v).sum());
                        if !(len > 0.0) {
                            return Err(Error::DegenerateGeometry { det: len });
                        }
                        for k in 0..d {
                            normal[k] = m[k] / len;
                        }
                        detj * len
                    }
                };
                let mut g_metric = [[0.0; 3]; 3];
                if need == Need::Laplacians {
                    for a in 0..d {
                        for b in 0..d {
                            g_metric[a][b] = (0..d).map(|k| jinv[a][k] * jinv[b][k]).sum();
                        }
                    }
                }
                let mut sp_evals = Vec::with_capacity(spaces.len());
                for si in 0..spaces.len() {
                    let be: Vec<&BasisEval> = (0..d).map(|a| &tables[si][a][e[a]][qm[a]]).collect();
                    let n = local_multi[si].len();
                    let mut pe = PointEval { val: vec![0.0; n], grad: Vec::new(), lap: Vec::new() };
                    if need != Need::Values {
                        pe.grad = vec![[0.0; 3]; n];
                    }
                    if need == Need::Laplacians {
                        pe.lap = vec![0.0; n];
                    }
                    for (li, lm) in local_multi[si].iter().enumerate() {
                        let v = |a: usize, k: usize| be[a].ders[k][lm[a]];
                        pe.val[li] = (0..d).map(|a| v(a, 0)).product();
                        if need == Need::Values {
                            continue;
                        }
                        let mut rg = [0.0; 3];
                        for a in 0..d {
                            rg[a] = (0..d).map(|b| v(b, usize::from(a == b))).product();
                        }
                        let mut g = [0.0; 3];
                        for k in 0..d {
                            g[k] = (0..d).map(|a| jinv[a][k] * rg[a]).sum();
                        }
                        pe.grad[li] = g;
                        if need == Need::Laplacians {
                            let mut lap = 0.0;
                            for a in 0..d {
                                for b in 0..d {
                                    let rh: f64 = (0..d)
                                        .map(|c| {
                                            let order = usize::from(c == a) + usize::from(c == b);
                                            v(c, order)
                                        })
                                        .product();
                                    let corr: f64 = (0..d).map(|k| g[k] * ge.hess[k][a][b]).sum();
                                    lap += (rh - corr) * g_metric[a][b];
                                }
                            }
                            pe.lap[li] = lap;
                        }
                    }
                    sp_evals.push(pe);
                }
                data.points.push(QPoint { w: w * measure, x: ge.x, normal, spaces: sp_evals });
            }
            f(&data);
        }
        Ok(())
    }

    fn faces(&self) -> Vec<(usize, usize)> {
        (0..self.geo.dim()).flat_map(|a| [(a, 0), (a, 1)]).collect()
    }

    fn sym_form(
        &self,
        space: &TensorSpace,
        need: Need,
        boundary: bool,
        kernel: &dyn Fn(&QPoint, usize, usize) -> f64,
    ) -> Result<SparseSymMatrix> {
        let mut t: Vec<Triplet> = Vec::new();
        let mut body = |el: &ElementData| {
            let idx = &el.idx[0];
            for i in 0..idx.len() {
                for j in 0..idx.len() {
                    if idx[i] > idx[j] {
                        continue;
                    }
                    let v: f64 = el.points.iter().map(|q| q.w * kernel(q, i, j)).sum();
                    if v != 0.0 {
                        t.push((idx[i], idx[j], v));
                    }
                }
            }
        };
        if boundary {
            for fc in self.faces() {
                self.for_each(&[space], need, Some(fc), &mut body)?;
            }
        } else {
            self.for_each(&[space], need, None, &mut body)?;
        }
        SparseSymMatrix::from_triangle_triplets(space.dim(), &t)
    }

    /// `M[i][j] = int phi_i phi_j`.
    pub fn mass(&self, space: &TensorSpace) -> Result<SparseSymMatrix> {
        self.sym_form(space, Need::Values, false, &|q, i, j| q.spaces[0].val[i] * q.spaces[0].val[j])
    }

    /// `M[i][j] = int psi_i phi_j` with `psi` from `rows`, `phi` from `cols`.
    pub fn mass_mixed(&self, rows: &TensorSpace, cols: &TensorSpace) -> Result<CsrMatrix> {
        self.mixed_form(rows, cols, Need::Values, &|q, i, j| q.spaces[0].val[i] * q.spaces[1].val[j])
    }

    /// `A[i][j] = int grad phi_i . grad phi_j`.
    pub fn stiffness(&self, space: &TensorSpace) -> Result<SparseSymMatrix> {
        self.sym_form(space, Need::Gradients, false, &|q, i, j| {
            let (a, b) = (&q.spaces[0].grad[i], &q.spaces[0].grad[j]);
            a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
        })
    }

    /// `B[i][j] = int lap phi_i lap phi_j`.
    pub fn biharmonic(&self, space: &TensorSpace) -> Result<SparseSymMatrix> {
        self.sym_form(space, Need::Laplacians, false, &|q, i, j| q.spaces[0].lap[i] * q.spaces[0].lap[j])
    }

    /// `K[j][i] = int (-lap phi_i) psi_j` with `phi` from `u` (columns) and
    /// `psi` from `w` (rows).
    pub fn laplacian_strong(&self, u: &TensorSpace, w: &TensorSpace) -> Result<CsrMatrix> {
        self.mixed_form(w, u, Need::Laplacians, &|q, j, i| -q.spaces[1].lap[i] * q.spaces[0].val[j])
    }

    fn mixed_form(
        &self,
        rows: &TensorSpace,
        cols: &TensorSpace,
        need: Need,
        kernel: &dyn Fn(&QPoint, usize, usize) -> f64,
    ) -> Result<CsrMatrix> {
        let mut t: Vec<Triplet> = Vec::new();
        self.for_each(&[rows, cols], need, None, &mut |el| {
            for (i, &gi) in el.idx[0].iter().enumerate() {
                for (j, &gj) in el.idx[1].iter().enumerate() {
                    let v: f64 = el.points.iter().map(|q| q.w * kernel(q, i, j)).sum();
                    if v != 0.0 {
                        t.push((gi, gj, v));
                    }
                }
            }
        })?;
        CsrMatrix::from_triplets(rows.dim(), cols.dim(), &t)
    }

    /// `b[i] = int f phi_i`.
    pub fn load(&self, space: &TensorSpace, f: ScalarFn<'_>) -> Result<Vec<f64>> {
        let mut out = vec![0.0; space.dim()];
        self.for_each(&[space], Need::Values, None, &mut |el| {
            for q in &el.points {
                let fv = f(&q.x);
                for (i, &gi) in el.idx[0].iter().enumerate() {
                    out[gi] += q.w * fv * q.spaces[0].val[i];
                }
            }
        })?;
        Ok(out)
    }

    /// `int |det J|`, the measure of the physical domain.
    pub fn volume(&self, space: &TensorSpace) -> Result<f64> {
        let mut total = 0.0;
        self.for_each(&[space], Need::Values, None, &mut |el| {
            total += el.points.iter().map(|q| q.w).sum::<f64>();
        })?;
        Ok(total)
    }

    /// Measure of the physical boundary.
    pub fn boundary_measure(&self, space: &TensorSpace) -> Result<f64> {
        let mut total = 0.0;
        for fc in self.faces() {
            self.for_each(&[space], Need::Values, Some(fc), &mut |el| {
                total += el.points.iter().map(|q| q.w).sum::<f64>();
            })?;
        }
        Ok(total)
    }

    /// `M_b[i][j] = int_{boundary} phi_i phi_j ds`.
    pub fn boundary_mass(&self, space: &TensorSpace) -> Result<SparseSymMatrix> {
        self.sym_form(space, Need::Values, true, &|q, i, j| q.spaces[0].val[i] * q.spaces[0].val[j])
    }

    /// `K_b[i][j] = int_{boundary} dn phi_i dn phi_j ds`.
    pub fn normal_derivative_mass(&self, space: &TensorSpace) -> Result<SparseSymMatrix> {
        self.sym_form(space, Need::Gradients, true, &|q, i, j| {
            normal_derivative(q, 0, i) * normal_derivative(q, 0, j)
        })
    }

    /// Mass matrix of a boundary space.
    pub fn boundary_space_mass(&self, bspace: &BoundarySpace) -> Result<SparseSymMatrix> {
        let mut t: Vec<Triplet> = Vec::new();
        for (fa, side) in self.faces() {
            self.for_each(&[bspace.parent()], Need::Values, Some((fa, side)), &mut |el| {
                let local = trace_locals(bspace, el, 0);
                for &(i, fi) in &local {
                    for &(j, fj) in &local {
                        if fi > fj {
                            continue;
                        }
                        let v: f64 = el.points.iter().map(|q| q.w * q.spaces[0].val[i] * q.spaces[0].val[j]).sum();
                        if v != 0.0 {
                            t.push((fi, fj, v));
                        }
                    }
                }
            })?;
        }
        SparseSymMatrix::from_triangle_triplets(bspace.dim(), &t)
    }

    /// `N[f][i] = int_{boundary} psi_f dn phi_i ds` with `psi` from the
    /// boundary space and `phi` from `space`.
    pub fn boundary_normal_coupling(&self, bspace: &BoundarySpace, space: &TensorSpace) -> Result<CsrMatrix> {
        let mut t: Vec<Triplet> = Vec::new();
        for fc in self.faces() {
            self.for_each(&[bspace.parent(), space], Need::Gradients, Some(fc), &mut |el| {
                let local = trace_locals(bspace, el, 0);
                for &(fl, f) in &local {
                    for (i, &gi) in el.idx[1].iter().enumerate() {
                        let v: f64 =
                            el.points.iter().map(|q| q.w * q.spaces[0].val[fl] * normal_derivative(q, 1, i)).sum();
                        if v != 0.0 {
                            t.push((f, gi, v));
                        }
                    }
                }
            })?;
        }
        CsrMatrix::from_triplets(bspace.dim(), space.dim(), &t)
    }

    /// `b[i] = int_{boundary} dn phi_i * data(x, n) ds`.
    pub fn rhs_normal_data(&self, space: &TensorSpace, data: BoundaryFn<'_>) -> Result<Vec<f64>> {
        let mut out = vec![0.0; space.dim()];
        for fc in self.faces() {
            self.for_each(&[space], Need::Gradients, Some(fc), &mut |el| {
                for q in &el.points {
                    let dv = data(&q.x, &q.normal);
                    if dv == 0.0 {
                        continue;
                    }
                    for (i, &gi) in el.idx[0].iter().enumerate() {
                        out[gi] += q.w * dv * normal_derivative(q, 0, i);
                    }
                }
            })?;
        }
        Ok(out)
    }

    /// `b[i] = int_{boundary} data(x, n) phi_i ds`.
    pub fn boundary_load(&self, space: &TensorSpace, data: BoundaryFn<'_>) -> Result<Vec<f64>> {
        let mut out = vec![0.0; space.dim()];
        for fc in self.faces() {
            self.for_each(&[space], Need::Values, Some(fc), &mut |el| {
                for q in &el.points {
                    let dv = data(&q.x, &q.normal);
                    for (i, &gi) in el.idx[0].iter().enumerate() {
                        out[gi] += q.w * dv * q.spaces[0].val[i];
                    }
                }
            })?;
        }
        Ok(out)
    }

    /// `b[f] = int_{boundary} data(x, n) psi_f ds` for a boundary space.
    pub fn boundary_space_load(&self, bspace: &BoundarySpace, data: BoundaryFn<'_>) -> Result<Vec<f64>> {
        let mut out = vec![0.0; bspace.dim()];
        for fc in self.faces() {
            self.for_each(&[bspace.parent()], Need::Values, Some(fc), &mut |el| {
                let local = trace_locals(bspace, el, 0);
                for q in &el.points {
                    let dv = data(&q.x, &q.normal);
                    for &(i, f) in &local {
                        out[f] += q.w * dv * q.spaces[0].val[i];
                    }
                }
            })?;
        }
        Ok(out)
    }
}

fn normal_derivative(q: &QPoint, space: usize, i: usize) -> f64 {
    let g = &q.spaces[space].grad[i];
    g[0] * q.normal[0] + g[1] * q.normal[1] + g[2] * q.normal[2]
}

/// Pairs `(local index, boundary space index)` of the parent functions with
/// a nonzero trace on the current face.
fn trace_locals(bspace: &BoundarySpace, el: &ElementData, space: usize) -> Vec<(usize, usize)> {
    let (dir, side) = el.face.expect("face loop");
    let d = bspace.parent().dim_space();
    el.multi[space]
        .iter()
        .enumerate()
        .filter_map(|(li, m)| bspace.face_index(dir, side, &m[..d]).map(|f| (li, f)))
        .collect()
}
