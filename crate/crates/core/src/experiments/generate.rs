use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::{Error, Frame, Result, Subset};

/// SplitMix64 finalizer, used to derive independent seeds from one master seed.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard normal variates: Box–Muller on ChaCha20 uniforms, both outputs
/// of each pair used in order (cosine first).
pub struct NormalStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl NormalStream {
    pub fn new(seed: u64) -> Self {
        NormalStream {
            rng: ChaCha20Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 ∈ (0, 1] keeps the logarithm finite.
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }
}

#[derive(Clone, Debug)]
pub struct ClassSpec {
    pub mean: Vec<f64>,
    pub covariance: DMatrix<f64>,
}

impl ClassSpec {
    pub fn isotropic(mean: Vec<f64>, variance: f64) -> Self {
        let p = mean.len();
        ClassSpec {
            mean,
            covariance: DMatrix::identity(p, p) * variance,
        }
    }
}

/// Gaussian classes with a per-class train/test split.
#[derive(Clone, Debug)]
pub struct GaussianMixtureSpec {
    pub classes: Vec<ClassSpec>,
    pub cases_per_class: usize,
    pub train_per_class: usize,
}

impl GaussianMixtureSpec {
    pub fn dim(&self) -> usize {
        self.classes.first().map_or(0, |c| c.mean.len())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadSpec(msg));
        if self.classes.len() < 2 {
            return bad("need at least two classes".into());
        }
        if self.classes.len() > 26 {
            return bad("at most 26 classes are labelled".into());
        }
        let p = self.dim();
        if p == 0 {
            return bad("class means must be nonempty".into());
        }
        for (k, c) in self.classes.iter().enumerate() {
            if c.mean.len() != p || c.covariance.shape() != (p, p) {
                return bad(format!("class {k} does not match dimension {p}"));
            }
            let sym = (&c.covariance - c.covariance.transpose()).abs().max();
            if sym > 1e-12 || c.covariance.clone().cholesky().is_none() {
                return bad(format!(
                    "covariance of class {k} is not symmetric positive-definite"
                ));
            }
        }
        if self.train_per_class == 0 || self.train_per_class >= self.cases_per_class {
            return bad(format!(
                "training size {} must lie in 1..{}",
                self.train_per_class, self.cases_per_class
            ));
        }
        Ok(())
    }

    /// Frame `A, B, C, …` with one label per class.
    pub fn frame(&self) -> Frame {
        Frame::new((0..self.classes.len()).map(|k| char::from(b'A' + k as u8).to_string()))
            .expect("validated class count")
    }
}

/// How training labels are coarsened into partially known classes.
#[derive(Clone, Debug, PartialEq)]
pub enum PkcScheme {
    /// Every label is the true class.
    Exact,
    /// Each class is divided evenly among the pairs it forms with every
    /// other class, in class order.
    SplitPairs,
    /// Every class but `middle` is exact; `middle`'s cases are divided
    /// evenly among the pairs it forms with the others.
    MiddleClass { middle: usize },
    /// Every other class joins the label on a fair coin toss.
    CoinFlip,
}

/// Label from a vector of coin outcomes, one per class; the true class is
/// always included.
pub fn coin_flip_pkc(true_class: usize, heads: &[bool]) -> Subset {
    Subset::from_indices(
        heads
            .iter()
            .enumerate()
            .filter(|&(k, &h)| h || k == true_class)
            .map(|(k, _)| k),
    )
}

/// `position` of `count` cases of `class` paired with the other classes in
/// turn, in contiguous equal blocks.
fn paired_label(class: usize, classes: usize, position: usize, count: usize) -> Subset {
    let others: Vec<usize> = (0..classes).filter(|&k| k != class).collect();
    let partner = others[position * others.len() / count];
    Subset::singleton(class) | Subset::singleton(partner)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub class: usize,
    pub pkc: Subset,
}

#[derive(Clone, Debug)]
pub struct SplitData {
    pub frame: Frame,
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
}

/// Draws every class, labels it, shuffles it and splits off the training
/// cases. Only training labels are coarsened; test labels are the true
/// classes.
pub fn generate(spec: &GaussianMixtureSpec, scheme: &PkcScheme, seed: u64) -> Result<SplitData> {
    spec.validate()?;
    if let PkcScheme::MiddleClass { middle } = scheme {
        if *middle >= spec.classes.len() {
            return Err(Error::BadSpec(format!(
                "middle class {middle} out of range"
            )));
        }
    }
    let k = spec.classes.len();
    let p = spec.dim();
    let mut normals = NormalStream::new(seed);
    let mut labels_rng = ChaCha20Rng::seed_from_u64(splitmix64(seed));

    let mut train = Vec::with_capacity(k * spec.train_per_class);
    let mut test = Vec::with_capacity(k * (spec.cases_per_class - spec.train_per_class));
    for (class, cs) in spec.classes.iter().enumerate() {
        let chol = cs
            .covariance
            .clone()
            .cholesky()
            .expect("validated covariance");
        let l = chol.l();
        let mean = DVector::from_column_slice(&cs.mean);
        let n = spec.cases_per_class;
        let mut cases: Vec<Sample> = (0..n)
            .map(|i| {
                let z = DVector::from_fn(p, |_, _| normals.next_standard());
                let x = &mean + &l * z;
                let pkc = match scheme {
                    PkcScheme::Exact => Subset::singleton(class),
                    PkcScheme::SplitPairs => paired_label(class, k, i, n),
                    PkcScheme::MiddleClass { middle } if *middle == class => {
                        paired_label(class, k, i, n)
                    }
                    PkcScheme::MiddleClass { .. } => Subset::singleton(class),
                    PkcScheme::CoinFlip => {
                        let heads: Vec<bool> =
                            (0..k).map(|_| labels_rng.random::<bool>()).collect();
                        coin_flip_pkc(class, &heads)
                    }
                };
                Sample {
                    features: x.iter().copied().collect(),
                    class,
                    pkc,
                }
            })
            .collect();
        cases.shuffle(&mut labels_rng);
        let rest = cases.split_off(spec.train_per_class);
        train.extend(cases);
        test.extend(rest.into_iter().map(|s| Sample {
            pkc: Subset::singleton(s.class),
            ..s
        }));
    }
    Ok(SplitData {
        frame: spec.frame(),
        train,
        test,
    })
}

/// Generative setup of one of the five synthetic studies. `sigma2`
/// overrides every class covariance with `sigma2 · I`.
pub fn case_study(id: u32, sigma2: Option<f64>) -> Result<(GaussianMixtureSpec, PkcScheme)> {
    if let Some(v) = sigma2 {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::BadSpec(format!("variance {v} must be positive")));
        }
    }
    let iso = |means: Vec<Vec<f64>>, default: f64| -> Vec<ClassSpec> {
        means
            .into_iter()
            .map(|m| ClassSpec::isotropic(m, sigma2.unwrap_or(default)))
            .collect()
    };
    let (classes, cases_per_class, train_per_class, scheme) = match id {
        1 => (
            iso(vec![vec![0.0, 0.0], vec![4.0, 0.0], vec![2.0, 2.0]], 1.0),
            200,
            20,
            PkcScheme::SplitPairs,
        ),
        2 => (
            iso(vec![vec![-3.0, 0.0], vec![3.0, 0.0], vec![0.0, 0.0]], 1.0),
            100,
            30,
            PkcScheme::MiddleClass { middle: 2 },
        ),
        3 => {
            let means = (0..5)
                .map(|k| {
                    let mut m = vec![0.0; 5];
                    m[k] = 2.0 * std::f64::consts::SQRT_2;
                    m
                })
                .collect();
            (iso(means, 1.0), 200, 30, PkcScheme::CoinFlip)
        }
        4 => {
            let h = 5.0 * 3f64.sqrt();
            (
                iso(vec![vec![0.0, 0.0], vec![10.0, 0.0], vec![5.0, h]], 10.0),
                200,
                20,
                PkcScheme::Exact,
            )
        }
        5 => {
            let means = vec![vec![10.0, 0.0], vec![20.0, 0.0], vec![30.0, 0.0]];
            let classes = match sigma2 {
                Some(_) => iso(means, 0.0),
                None => vec![
                    ClassSpec::isotropic(means[0].clone(), 10.0),
                    ClassSpec {
                        mean: means[1].clone(),
                        covariance: DMatrix::from_diagonal(&DVector::from_vec(vec![10.0, 1.0])),
                    },
                    ClassSpec::isotropic(means[2].clone(), 10.0),
                ],
            };
            (classes, 100, 30, PkcScheme::Exact)
        }
        _ => {
            return Err(Error::BadSpec(format!(
                "no case study {id}; expected 1 to 5"
            )))
        }
    };
    Ok((
        GaussianMixtureSpec {
            classes,
            cases_per_class,
            train_per_class,
        },
        scheme,
    ))
}
