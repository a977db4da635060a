use rand::Rng;

use super::gen::{basis_plus, projective_points, random_nonzero, random_vector, sample_rng, scramble, LooseBuilder};
use super::{control, Acc, Control, Mode, Runner, SuiteConfig, VerifyError};
use crate::classify::{audit_indices, falsify, two_loose_audit, TwoLooseVerdict};
use crate::families::{build_named, series_pair_extension, FamilyTag};
use crate::gfq::{field, Code, FieldSpec};
use crate::matroid::LinearMatroid;

const EXHAUSTIVE_MAX_RANK: usize = 6;
const EXHAUSTIVE_MAX_SIZE: usize = 10;
/// Instances sampled at ranks `2q - 1` and `2q` for the spanning-circuit check.
const LOW_RANK_PROBES: u64 = 200;

// rank, the points off the fixed basis, and the subsets of them to add
type Sweep = (usize, Vec<Vec<Code>>, Vec<Vec<u8>>);

pub(crate) struct TwoLooseSuite {
    cfg: SuiteConfig,
    f: &'static FieldSpec,
    // exhaustive only
    sweep: Vec<Sweep>,
}

fn combinations(n: usize, max_k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max_k {
        let mut next = Vec::new();
        for c in &frontier {
            let from = c.last().map_or(0, |&x| x as usize + 1);
            for j in from..n {
                let mut d = c.clone();
                d.push(j as u8);
                next.push(d);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl TwoLooseSuite {
    pub(crate) fn new(cfg: &SuiteConfig) -> Result<Self, VerifyError> {
        if !(2..=5).contains(&cfg.q) {
            return Err(VerifyError::Guard(format!(
                "thm-two-loose takes q in 2..5 (got {})",
                cfg.q
            )));
        }
        if cfg.min_rank < 2 {
            return Err(VerifyError::Guard("thm-two-loose starts at rank 2".into()));
        }
        if cfg.max_rank > 64 {
            return Err(VerifyError::Guard("rank above 64".into()));
        }
        let f = field(cfg.q as u32).map_err(|e| VerifyError::Config(e.to_string()))?;
        let mut sweep = Vec::new();
        if cfg.mode == Mode::Exhaustive {
            if cfg.q != 2 || cfg.max_rank > EXHAUSTIVE_MAX_RANK {
                return Err(VerifyError::Guard(format!(
                    "exhaustive thm-two-loose is binary only, rank <= {EXHAUSTIVE_MAX_RANK}, \
                     at most {EXHAUSTIVE_MAX_SIZE} elements"
                )));
            }
            for r in cfg.rank_range() {
                let off: Vec<Vec<Code>> = projective_points(f, r)
                    .into_iter()
                    .filter(|p| p.iter().filter(|&&a| a != 0).count() > 1)
                    .collect();
                let combos = combinations(off.len(), EXHAUSTIVE_MAX_SIZE.saturating_sub(r));
                sweep.push((r, off, combos));
            }
        }
        Ok(TwoLooseSuite {
            cfg: cfg.clone(),
            f,
            sweep,
        })
    }

    fn q(&self) -> usize {
        self.cfg.q as usize
    }

    /// Columns kept loose around an all-ones `e` (so no coloops), with
    /// extra targets among the seed columns.
    fn loose_extension(&self, r: usize, extra: Option<Vec<Code>>, rng: &mut impl Rng) -> Option<LooseBuilder> {
        let f = self.f;
        let (mut cols, mut labels) = basis_plus(r, vec![1; r]);
        let mut targets = vec![r];
        if let Some(v) = extra {
            cols.push(v);
            labels.push("f".into());
            targets.push(r + 1);
        }
        let mut b = LooseBuilder::new(f, r, cols, labels, &targets)?;
        let attempts = rng.gen_range(0..=3 * r);
        for k in 0..attempts {
            let v = if rng.gen_bool(0.5) {
                // sparse: a few random entries
                let mut v = vec![0 as Code; r];
                for _ in 0..rng.gen_range(1..=(2 * self.q()).min(r)) {
                    v[rng.gen_range(0..r)] = random_nonzero(f, rng);
                }
                v
            } else {
                random_vector(f, r, rng)
            };
            b.try_add(v, format!("g{}", k + 1));
        }
        Some(b)
    }

    fn sampled_instance(&self, r: usize, index: u64, seed: u64) -> LinearMatroid {
        let f = self.f;
        let mut rng = sample_rng(seed, r, index);
        let (cols, labels): (Vec<Vec<Code>>, Vec<String>) = match index % 4 {
            // a series pair over K \ v with v loose in K
            0 if r >= 3 => {
                let k = self
                    .loose_extension(r - 1, None, &mut rng)
                    .expect("all-ones seed is loose");
                let km = super::gen::matroid_of(f, r - 1, k.cols().to_vec(), k.labels().to_vec());
                let v = km.rep().column(r - 1).to_vec();
                let n = km.delete(&["e"]).expect("e exists");
                let m = series_pair_extension(&n, &v, "e", "f").expect("ranks agree");
                (m.rep().columns().map(|c| c.to_vec()).collect(), m.labels().to_vec())
            }
            // a second target of low weight beside e
            2 => {
                let mut fv = vec![0 as Code; r];
                let w = rng.gen_range(2..=(2 * self.q()).min(r));
                for _ in 0..w {
                    fv[rng.gen_range(0..r)] = random_nonzero(f, &mut rng);
                }
                let b = self
                    .loose_extension(r, Some(fv), &mut rng)
                    .or_else(|| self.loose_extension(r, None, &mut rng))
                    .expect("all-ones seed is loose");
                (b.cols().to_vec(), b.labels().to_vec())
            }
            3 => {
                let n = rng.gen_range(r + 1..=r + 4);
                let cols: Vec<Vec<Code>> = (0..n).map(|_| random_vector(f, r, &mut rng)).collect();
                (cols, (1..=n).map(|k| format!("c{k}")).collect())
            }
            _ => {
                let b = self.loose_extension(r, None, &mut rng).expect("all-ones seed is loose");
                (b.cols().to_vec(), b.labels().to_vec())
            }
        };
        scramble(f, r, &cols, &labels, &mut rng)
    }

    fn check(&self, r: usize, index: u64, m: &LinearMatroid, acc: &mut Acc, tag: &str) {
        acc.examined();
        let q = self.q();
        acc.tally(format!("{tag}.instances"), 1);
        let loose: Vec<usize> = (0..m.len()).filter(|&j| m.is_loose(j)).collect();
        acc.tally(format!("{tag}.loose_elements"), loose.len() as u64);
        if loose.len() < 2 {
            return;
        }
        acc.tally(format!("{tag}.with_loose_pair"), 1);
        for (a, &e) in loose.iter().enumerate() {
            for &f in &loose[a + 1..] {
                let v = audit_indices(m, e, f);
                acc.tally(format!("{tag}.{}", v.name()), 1);
                match v {
                    TwoLooseVerdict::Violation(fal) => acc.violate(r, index, *fal),
                    TwoLooseVerdict::RankOk { spanning_one: true } => acc.tally(format!("{tag}.spanning_one"), 1),
                    _ => {}
                }
            }
        }
        if r > 2 * q && m.dual().is_simple() {
            acc.tally(format!("{tag}.cosimple_with_loose_pair"), 1);
            acc.violate(
                r,
                index,
                falsify(
                    m,
                    "simple and cosimple with two loose elements",
                    format!("rank {r} exceeds 2q = {}", 2 * q),
                    m.labels_of(&loose[..2]),
                ),
            );
        }
    }
}

impl Runner for TwoLooseSuite {
    fn units(&self) -> Vec<(usize, u64)> {
        match self.cfg.mode {
            Mode::Exhaustive => self.sweep.iter().map(|(r, _, c)| (*r, c.len() as u64)).collect(),
            Mode::Sampled => self.cfg.rank_range().map(|r| (r, self.cfg.samples)).collect(),
        }
    }

    fn run(&self, r: usize, index: u64, acc: &mut Acc) {
        let m = match self.cfg.mode {
            Mode::Exhaustive => {
                let (_, off, combos) = self.sweep.iter().find(|s| s.0 == r).expect("rank swept");
                let (mut cols, mut labels) = basis_plus(r, Vec::new());
                cols.pop();
                labels.pop();
                for &j in &combos[index as usize] {
                    cols.push(off[j as usize].clone());
                    labels.push(format!("x{}", j + 1));
                }
                super::gen::matroid_of(self.f, r, cols, labels)
            }
            Mode::Sampled => self.sampled_instance(r, index, self.cfg.seed),
        };
        if m.rank() < r || !m.is_simple() || !m.coloops().is_empty() {
            acc.tally(format!("r{r}.filtered"), 1);
            return;
        }
        self.check(r, index, &m, acc, &format!("r{r}"));
    }

    fn controls(&self, acc: &mut Acc) -> Vec<Control> {
        let q = self.q();
        let f = self.f;
        let mut out = Vec::new();

        // series pairs at rank 2q + 4: over a circuit, and over a sampled
        // loose extension
        let top = 2 * q + 4;
        let circuit = build_named(FamilyTag::Circuit {
            r: top - 1,
            q: self.cfg.q,
        })
        .expect("circuit builds");
        let v = circuit.rep().column_by_label("e").expect("circuit has e").to_vec();
        let n = circuit.delete(&["e"]).expect("e exists");
        let pair = series_pair_extension(&n, &v, "s", "t").expect("ranks agree");
        let observed = match two_loose_audit(&pair, "s", "t") {
            Ok(v) => v.name().to_string(),
            Err(e) => e.to_string(),
        };
        out.push(control(
            &format!("series pair over a rank-{} circuit", top - 1),
            false,
            "COCIRCUIT_PAIR",
            observed,
        ));
        let mut rng = sample_rng(self.cfg.seed, top, u64::MAX >> 24);
        let k = self
            .loose_extension(top - 1, None, &mut rng)
            .expect("all-ones seed is loose");
        let km = super::gen::matroid_of(f, top - 1, k.cols().to_vec(), k.labels().to_vec());
        let v = km.rep().column(top - 1).to_vec();
        let n = km.delete(&["e"]).expect("e exists");
        let pair = series_pair_extension(&n, &v, "s", "t").expect("ranks agree");
        let observed = match two_loose_audit(&pair, "s", "t") {
            Ok(v) => v.name().to_string(),
            Err(e) => e.to_string(),
        };
        out.push(control(
            &format!("series pair over a sampled rank-{} loose extension", top - 1),
            false,
            "COCIRCUIT_PAIR",
            observed,
        ));

        // below the bound, where a spanning circuit through one of the pair
        // can occur; every such pair must respect 2q - 1
        let mut probe = Acc::default();
        for r in (2 * q - 1).max(2)..=2 * q {
            for i in 0..LOW_RANK_PROBES {
                let m = self.sampled_instance(r, i, self.cfg.seed ^ 0x5eed);
                if m.rank() == r && m.is_simple() && m.coloops().is_empty() {
                    self.check(r, i, &m, &mut probe, &format!("low.r{r}"));
                }
            }
        }
        let pts = projective_points(f, 3);
        let labels = (1..=pts.len()).map(|k| format!("p{k}")).collect();
        let plane = super::gen::matroid_of(f, 3, pts, labels);
        self.check(3, 0, &plane, &mut probe, "low.plane");
        let probe_violations = probe.violation_count;
        for (k, v) in probe.tallies {
            acc.tally(k, v);
        }
        out.push(control(
            "low-rank probes keep rank <= 2q - 1 under a spanning circuit through one",
            false,
            "0 violations",
            format!("{probe_violations} violations"),
        ));

        // a pair that is not a cocircuit, above 2q, audited without the
        // looseness precondition
        let r = 2 * q + 1;
        let (mut cols, mut labels) = basis_plus(r, vec![1; r]);
        let mut g = vec![0 as Code; r];
        g[0] = 1;
        g[1] = 1;
        cols.push(g);
        labels.push("f".into());
        let m = super::gen::matroid_of(f, r, cols, labels);
        let observed = audit_indices(&m, r, r + 1).name().to_string();
        out.push(control("non-loose pair at rank 2q + 1", true, "VIOLATION", observed));
        out
    }

    fn bias(&self) -> Option<String> {
        (self.cfg.mode == Mode::Sampled).then(|| {
            "one quarter each: series pairs over loose extensions one rank down, loose extensions of an \
             all-ones e, the same with a second low-weight target, uniform column sets; random coordinates"
                .to_string()
        })
    }
}
