use super::finite::{Elem, FiniteAlgebra};
use crate::error::{Error, Result};

/// Direct product of algebras over one signature. Elements are encoded
/// mixed-radix per sort with the first factor most significant.
pub fn direct_product(algs: &[&FiniteAlgebra]) -> Result<FiniteAlgebra> {
    let first = *algs
        .first()
        .ok_or_else(|| Error::InvalidAlgebra("empty product".into()))?;
    if algs.iter().any(|a| a.signature() != first.signature()) {
        return Err(Error::SignatureMismatch);
    }
    let nsorts = first.sort_count();
    let mut sizes = vec![1usize; nsorts];
    for a in algs {
        for (s, size) in sizes.iter_mut().enumerate() {
            *size = size
                .checked_mul(a.size(s))
                .filter(|&n| n <= u32::MAX as usize)
                .ok_or(Error::Overflow(a.size(s)))?;
        }
    }
    let mut coords = vec![0; algs.len()];
    let mut fargs: Vec<Vec<Elem>> = vec![Vec::new(); algs.len()];
    let prod = FiniteAlgebra::from_fn_shared(first.shared_signature().clone(), sizes, |si, args| {
        let sym = first.signature().symbol(si);
        fargs.iter_mut().for_each(Vec::clear);
        for (&x, &srt) in args.iter().zip(&sym.args) {
            decode_into(algs, srt, x, &mut coords);
            for (k, &c) in coords.iter().enumerate() {
                fargs[k].push(c);
            }
        }
        let mut out = 0;
        for (k, a) in algs.iter().enumerate() {
            out = out * a.size(sym.out) + a.apply(si, &fargs[k]);
        }
        out
    })?;
    if algs.iter().all(|a| a.labels().is_some()) {
        let labels = (0..nsorts)
            .map(|s| {
                (0..prod.size(s))
                    .map(|e| {
                        decode_into(algs, s, e, &mut coords);
                        let parts: Vec<String> =
                            coords.iter().zip(algs).map(|(&c, a)| a.label(s, c)).collect();
                        format!("({})", parts.join(","))
                    })
                    .collect()
            })
            .collect();
        return prod.with_labels(labels);
    }
    Ok(prod)
}

/// `alg^k`, encoded as in [`direct_product`].
pub fn power(alg: &FiniteAlgebra, k: usize) -> Result<FiniteAlgebra> {
    if k == 0 {
        return Err(Error::InvalidAlgebra("zeroth power".into()));
    }
    let v: Vec<&FiniteAlgebra> = vec![alg; k];
    direct_product(&v)
}

/// Coordinates of product element `e` of sort `sort`.
pub fn product_coords(algs: &[&FiniteAlgebra], sort: usize, e: Elem) -> Vec<Elem> {
    let mut out = vec![0; algs.len()];
    decode_into(algs, sort, e, &mut out);
    out
}

/// Product element with the given coordinates.
pub fn product_elem(algs: &[&FiniteAlgebra], sort: usize, coords: &[Elem]) -> Elem {
    coords
        .iter()
        .zip(algs)
        .fold(0, |acc, (&c, a)| acc * a.size(sort) + c)
}

fn decode_into(algs: &[&FiniteAlgebra], sort: usize, mut e: Elem, out: &mut [Elem]) {
    for k in (0..algs.len()).rev() {
        let n = algs[k].size(sort);
        out[k] = e % n;
        e /= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;

    fn zn(n: usize) -> FiniteAlgebra {
        FiniteAlgebra::from_fn(Signature::single_sorted(&[("+", 2)]), vec![n], move |_, a| {
            (a[0] + a[1]) % n
        })
        .unwrap()
    }

    #[test]
    fn z2_times_z3_is_cyclic() {
        let (a, b) = (zn(2), zn(3));
        let p = direct_product(&[&a, &b]).unwrap();
        assert_eq!(p.sizes(), &[6]);
        let one = product_elem(&[&a, &b], 0, &[1, 1]);
        let mut x = one;
        let mut order = 1;
        while x != 0 {
            x = p.apply2(0, x, one);
            order += 1;
        }
        assert_eq!(order, 6);
        assert_eq!(product_coords(&[&a, &b], 0, 5), vec![1, 2]);
    }

    #[test]
    fn mismatched_signatures_rejected() {
        let a = zn(2);
        let b = FiniteAlgebra::from_fn(Signature::single_sorted(&[("*", 2)]), vec![2], |_, x| {
            x[0] * x[1]
        })
        .unwrap();
        assert!(matches!(direct_product(&[&a, &b]), Err(Error::SignatureMismatch)));
    }

    #[test]
    fn two_sorted_sizes_multiply() {
        let a = FiniteAlgebra::from_fn(Signature::tau(), vec![6, 3], |_, x| (x[0] + x[1]) % 3).unwrap();
        let p = power(&a, 2).unwrap();
        assert_eq!(p.sizes(), &[36, 9]);
    }
}
