use alloc::vec;
use alloc::vec::Vec;

use crate::attain::Operator;
use crate::linalg::Matrix;
use crate::norm::NormSpace;

/// A named operator used by the suites.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub operator: Operator,
}

fn entry(name: &'static str, rows: &[Vec<f64>], domain: NormSpace, codomain: NormSpace) -> CorpusEntry {
    let m = Matrix::from_rows(rows).expect("corpus matrix");
    CorpusEntry { name, operator: Operator::new(m, domain, codomain).expect("corpus dimensions") }
}

/// Worked examples plus one operator for each solver path.
pub fn corpus() -> Vec<CorpusEntry> {
    let s3 = libm::sqrt(3.0);
    let hex = NormSpace::regular_hexagon;
    let sup = || NormSpace::sup(2).expect("sup plane");
    let lp = |p: f64| NormSpace::lp(2, p).expect("lp plane");
    let e2 = || NormSpace::euclidean(2);
    let gram = NormSpace::inner_product(Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).expect("gram"))
        .expect("positive definite");
    vec![
        entry("hexagon-projection", &[vec![1.0, 0.0], vec![0.0, 0.0]], hex(), hex()),
        entry("hexagon-example", &[vec![0.75, -s3 / 4.0], vec![s3 / 4.0, 0.75]], hex(), hex()),
        entry("sup-remark", &[vec![0.5, -0.5], vec![0.5, 0.5]], sup(), sup()),
        entry("sup-projection", &[vec![1.0, 0.0], vec![0.0, 0.0]], sup(), sup()),
        entry("euclidean-diag", &[vec![2.0, 0.0], vec![0.0, 1.0]], e2(), e2()),
        entry(
            "euclidean3-diag",
            &[vec![3.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
            NormSpace::euclidean(3),
            NormSpace::euclidean(3),
        ),
        entry("gram-shear", &[vec![1.0, 2.0], vec![0.0, 1.0]], gram.clone(), gram),
        entry("l3-diag", &[vec![2.0, 0.0], vec![0.0, 1.0]], lp(3.0), lp(3.0)),
        entry("l4-shear", &[vec![1.0, 1.0], vec![0.0, 1.0]], lp(4.0), lp(4.0)),
        entry("l1-mixed", &[vec![1.0, 2.0], vec![-1.0, 0.5]], lp(1.0), lp(1.0)),
        entry("hexagon-to-euclidean", &[vec![1.0, 0.3], vec![0.2, 1.0]], hex(), e2()),
        entry("l3-to-sup", &[vec![1.0, 0.5], vec![-0.3, 1.0]], lp(3.0), sup()),
        entry("euclidean-zero", &[vec![0.0, 0.0], vec![0.0, 0.0]], e2(), e2()),
    ]
}
