//! Short presentations of crystallographic groups from generating sets.
//!
//! The group is an extension of its translation lattice `T` by the finite
//! point group `P = G/T`. A presentation of `P` is lifted, lattice basis words
//! are made to commute, and conjugation by each generator is written back in
//! the basis. The union presents `G`; it is then simplified and pruned.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::affine::{point_group_image, AffineIsometry, PointGroupElement, TranslationLattice};
use crate::cayley::{ball_bounded, shortest_translation_words, HarvestOptions, TranslationHarvest, TranslationWord};
use crate::coset::{coset_enumerate, group_order, order_check, Verdict, DEFAULT_MAX_COSETS};
use crate::error::{Error, Result};
use crate::finite::{short_presentation_finite, FiniteGroupModel, DEFAULT_CLOSURE_BOUND};
use crate::group::{Element, MatrixGroup};
use crate::rational::{format_rational, frac, int, Rational};
use crate::symop::{format_symop, GeneratingSetDocument, NamedGenerator};
use crate::tietze::{reduce_with, tietze_simplify_tagged, Tagged, DEFAULT_BUDGET};
use crate::words::{canonical_relator, format_word, free_reduce, Letter, Presentation, Word};

/// Everything the extension construction needs.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub names: Vec<char>,
    pub generators: Vec<AffineIsometry>,
    pub group: MatrixGroup,
    pub harvest: TranslationHarvest,
    /// Basis words `y_1, ..., y_r` in lattice-basis order.
    pub basis_words: Vec<Word>,
    /// Lattice spanned by the basis words; equal to `harvest.lattice` as a set.
    pub lattice: TranslationLattice,
    pub images: Vec<PointGroupElement>,
    pub point_group: FiniteGroupModel,
    pub point_presentation: Presentation,
}

impl ExtensionData {
    pub fn point_order(&self) -> usize {
        self.point_group.order()
    }

    pub fn rank(&self) -> usize {
        self.basis_words.len()
    }

    /// `y_1^{c_1} ... y_r^{c_r}`.
    pub fn lattice_word(&self, coeffs: &[i64]) -> Word {
        let mut w = Word::empty();
        for (y, &c) in self.basis_words.iter().zip(coeffs) {
            w = w.concat(&y.pow(c));
        }
        w
    }

    /// Coefficients of a translation in the basis-word basis.
    pub fn coefficients(&self, v: &[Rational]) -> Result<Vec<i64>> {
        self.lattice.solve(v).ok_or(Error::NotInLattice)
    }

    /// Translation of a word that evaluates to a lattice translation.
    pub fn translation_of_word(&self, w: &Word) -> Result<Vec<Rational>> {
        let e = self.group.evaluate(w)?;
        if !self.group.is_translation(&e) {
            return Err(Error::Verification(format!(
                "word {} is not a translation",
                format_word(w, &self.names)
            )));
        }
        Ok(self.group.translation(&e))
    }

    /// The words `y_i^m` killing `mT`.
    pub fn lattice_powers(&self, m: usize) -> Vec<Word> {
        self.basis_words.iter().map(|y| y.pow(m as i64)).collect()
    }

    pub fn evaluates_to_identity(&self, w: &Word) -> Result<bool> {
        Ok(self.group.is_identity(&self.group.evaluate(w)?))
    }
}

/// Lattice spanned by `basis` vectors, in the order given (not HNF).
fn ordered_lattice(basis: &[Vec<Rational>], hnf: &TranslationLattice) -> Result<TranslationLattice> {
    let l = crate::affine::hnf_lattice(hnf.dim(), basis);
    if l != *hnf {
        return Err(Error::Verification("basis words do not span the lattice".into()));
    }
    Ok(l)
}

pub fn build_extension_data(doc: &GeneratingSetDocument, options: &PresentOptions) -> Result<ExtensionData> {
    let generators = doc.ops();
    let names = doc.names();
    let group = MatrixGroup::new(&generators)?;
    if let Some(i) = group.identity_letter() {
        return Err(Error::IdentityGenerator(names[i].to_string()));
    }
    let mut harvest = shortest_translation_words(&group, &options.harvest)?;
    let images = generators
        .iter()
        .map(|g| point_group_image(g, &harvest.lattice))
        .collect::<Result<Vec<_>>>()?;
    let point_group = FiniteGroupModel::from_point_group(&images, &harvest.lattice, options.closure_bound)?;
    let point_presentation = short_presentation_finite(&point_group, &names)?;
    let point_translations = point_presentation
        .relators
        .iter()
        .map(|r| Ok(group.translation(&group.evaluate(r)?)))
        .collect::<Result<Vec<_>>>()?;
    if let Some(basis) = choose_basis(&harvest, &generators, &point_translations)? {
        harvest.basis = basis;
    }
    let basis_words: Vec<Word> = harvest.basis.iter().map(|t| t.word.clone()).collect();
    let vectors: Vec<Vec<Rational>> = harvest.basis.iter().map(|t| t.vector.clone()).collect();
    let lattice = ordered_lattice(&vectors, &harvest.lattice)?;
    Ok(ExtensionData {
        names,
        generators,
        group,
        harvest,
        basis_words,
        lattice,
        images,
        point_group,
        point_presentation,
    })
}

const CYCLE_BALL_BOUND: usize = 200_000;

/// Shortest relators of the group: closed walks of length at most `max_len` in the
/// Cayley graph, canonical, shortlex order, each kept only if the earlier ones do not
/// rewrite it to the empty word.
pub fn cycle_relators(group: &MatrixGroup, max_len: usize, budget: usize) -> Result<Vec<Word>> {
    if max_len == 0 {
        return Ok(Vec::new());
    }
    // The radius shrinks until the ball fits the bound; relators found are still valid.
    let mut radius = max_len / 2;
    let b = loop {
        match ball_bounded(group, radius, CYCLE_BALL_BOUND) {
            Err(Error::MemoryBound(_)) if radius > 1 => radius -= 1,
            other => break other?,
        }
    };
    let max_len = max_len.min(2 * radius + 1);
    let mut found = BTreeSet::new();
    for i in 0..b.len() {
        let di = b.distance(i);
        for code in 0..group.letter_count() {
            let l = Letter::from_code(code);
            let Some(j) = b.position(&group.step(&b.elements()[i], l)?) else { continue };
            if di + 1 + b.distance(j) > max_len {
                continue;
            }
            let w = canonical_relator(&b.word(i).concat(&Word(vec![l])).concat(&b.word(j).inverse()));
            if !w.is_empty() {
                found.insert(w);
            }
        }
    }
    let mut kept: Vec<Word> = Vec::new();
    for w in found {
        if !reduce_with(&w, &kept, budget).is_empty() {
            kept.push(w);
        }
    }
    Ok(kept)
}

/// Candidate basis words considered when choosing a basis; keeps subset counts small.
const BASIS_CANDIDATE_SUBSETS: usize = 20_000;

/// Among unimodular subsets of the harvested words, the basis whose lifted,
/// conjugation and commutator relators are shortest before simplification.
/// Ties go to the lighter subset, then to discovery order. `None` if no harvested
/// subset is unimodular (the harvest basis is kept).
fn choose_basis(
    harvest: &TranslationHarvest,
    generators: &[AffineIsometry],
    point_translations: &[Vec<Rational>],
) -> Result<Option<Vec<TranslationWord>>> {
    let lattice = &harvest.lattice;
    let r = lattice.rank();
    if r == 0 {
        return Ok(None);
    }
    let mut cands: Vec<&TranslationWord> = harvest.all.iter().collect();
    let mut k = cands.len();
    while k > r && binomial(k, r) > BASIS_CANDIDATE_SUBSETS {
        k -= 1;
    }
    if k < r {
        return Ok(None);
    }
    cands.truncate(k);
    let coords = |v: &[Rational]| lattice.solve(v).ok_or(Error::NotInLattice);
    let h: Vec<Vec<i64>> = cands.iter().map(|t| coords(&t.vector)).collect::<Result<_>>()?;
    // conj[i][x]: coordinates of x^-1 t_i x.
    let mut conj = Vec::with_capacity(k);
    for t in &cands {
        let tr = AffineIsometry::from_translation(t.vector.clone());
        let mut row = Vec::with_capacity(generators.len());
        for x in generators {
            let c = x.inverse().then(&tr)?.then(x)?;
            let v = c.translation_of().ok_or(Error::NotInLattice)?;
            row.push(coords(&v)?);
        }
        conj.push(row);
    }
    let fixed: Vec<Vec<i64>> = point_translations.iter().map(|v| coords(v)).collect::<Result<_>>()?;
    let lens: Vec<usize> = cands.iter().map(|t| t.word.len()).collect();
    let mut best: Option<((i128, usize), Vec<usize>)> = None;
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        let flat: Vec<i64> = idx.iter().flat_map(|&i| h[i].iter().copied()).collect();
        if crate::affine::determinant(&flat, r).is_some_and(|d| d.abs() == 1) {
            let inv = crate::affine::unimodular_inverse(&flat, r);
            let cost_of = |v: &[i64]| -> i128 {
                (0..r)
                    .map(|j| {
                        let c: i128 = (0..r).map(|i| v[i] as i128 * inv[i * r + j] as i128).sum();
                        c.abs() * lens[idx[j]] as i128
                    })
                    .sum()
            };
            let weight: usize = idx.iter().map(|&i| lens[i]).sum();
            let mut cost: i128 = fixed.iter().map(|v| cost_of(v)).sum();
            for &i in &idx {
                cost += conj[i].iter().map(|v| cost_of(v) + lens[i] as i128).sum::<i128>();
            }
            cost += 2 * (r as i128 - 1) * weight as i128;
            let key = (cost, weight);
            if best.as_ref().is_none_or(|(b, _)| key < *b) {
                best = Some((key, idx.clone()));
            }
        }
        let mut p = r;
        loop {
            if p == 0 {
                return Ok(best.map(|(_, s)| s.iter().map(|&i| cands[i].clone()).collect()));
            }
            p -= 1;
            if idx[p] < k - r + p {
                break;
            }
        }
        idx[p] += 1;
        for q in p + 1..r {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Solves against the ordered basis rather than the HNF rows.
pub(crate) fn basis_coefficients(e: &ExtensionData, v: &[Rational]) -> Result<Vec<i64>> {
    let r = e.rank();
    // Express v in the HNF basis, then convert through the basis-word vectors.
    let hnf_coeffs = e.lattice.solve(v).ok_or(Error::NotInLattice)?;
    let words: Vec<Vec<i64>> = e
        .harvest
        .basis
        .iter()
        .map(|t| e.lattice.solve(&t.vector).ok_or(Error::NotInLattice))
        .collect::<Result<_>>()?;
    // Solve c . W = hnf_coeffs over the integers, W unimodular r x r.
    let w_flat: Vec<i64> = words.iter().flatten().copied().collect();
    let inv = crate::affine::unimodular_inverse(&w_flat, r);
    Ok((0..r)
        .map(|j| (0..r).map(|i| hnf_coeffs[i] * inv[i * r + j]).sum())
        .collect())
}

/// Relators `r w_r^-1` for each point-group relator `r`.
pub fn lift_point_relators(e: &ExtensionData) -> Result<Vec<(Word, Word)>> {
    lift_with(e, &mut TranslationWords::basis_only())
}

fn lift_with(e: &ExtensionData, tw: &mut TranslationWords) -> Result<Vec<(Word, Word)>> {
    e.point_presentation
        .relators
        .iter()
        .map(|r| {
            let v = e.translation_of_word(r)?;
            let lifted = free_reduce(&r.concat(&tw.word(e, &v)?.inverse()));
            Ok((r.clone(), lifted))
        })
        .collect()
}

/// Chooses the word standing for a translation in lifted and conjugation relators.
///
/// With shortcuts on, a harvested word shorter than the basis-word product is used,
/// and the relator equating the two is recorded; the recorded relators together with
/// the shortcut versions imply the basis-word versions.
struct TranslationWords {
    shortcuts: bool,
    recorded: Vec<Word>,
}

impl TranslationWords {
    fn basis_only() -> Self {
        TranslationWords { shortcuts: false, recorded: Vec::new() }
    }

    fn word(&mut self, e: &ExtensionData, v: &[Rational]) -> Result<Word> {
        let c = basis_coefficients(e, v)?;
        let product = e.lattice_word(&c);
        if !self.shortcuts {
            return Ok(product);
        }
        let short = e.harvest.all.iter().filter(|t| t.vector == v).map(|t| &t.word).min();
        match short {
            Some(w) if w.len() < product.len() => {
                let rel = canonical_relator(&w.concat(&product.inverse()));
                if !rel.is_empty() && !self.recorded.contains(&rel) {
                    self.recorded.push(rel);
                }
                Ok(w.clone())
            }
            _ => Ok(product),
        }
    }
}

/// Commutators of basis words, or of all harvested translation words.
pub fn commutator_relators(e: &ExtensionData, all_words: bool) -> Vec<Word> {
    let words: Vec<Word> = if all_words {
        e.harvest.words().iter().map(|t| t.word.clone()).collect()
    } else {
        e.basis_words.clone()
    };
    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            out.push(Word::commutator(&words[i], &words[j]));
        }
    }
    out
}

/// Relators `x^-1 y x w_xy^-1` for each generator `x` and basis word `y`.
pub fn conjugation_relators(e: &ExtensionData) -> Result<Vec<Word>> {
    conjugation_with(e, &mut TranslationWords::basis_only())
}

fn conjugation_with(e: &ExtensionData, tw: &mut TranslationWords) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for x in 0..e.generators.len() {
        let xw = Word::generator(x);
        for y in &e.basis_words {
            let conj = xw.inverse().concat(y).concat(&xw);
            let v = e.translation_of_word(&conj)?;
            let rel = free_reduce(&conj.concat(&tw.word(e, &v)?.inverse()));
            if !canonical_relator(&rel).is_empty() {
                out.push(rel);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentOptions {
    #[serde(skip)]
    pub harvest: HarvestOptions,
    pub radius_cap: usize,
    /// Commutators of all harvested translation words instead of basis words.
    pub all_commutators: bool,
    /// Use shorter harvested words for translations in lifted and conjugation relators.
    pub shortcuts: bool,
    /// Closed Cayley-graph walks up to this length are added before simplification; 0 disables.
    pub cycle_length: usize,
    pub verify_m: Vec<usize>,
    pub prune_m: Vec<usize>,
    pub max_cosets: usize,
    pub prune_max_cosets: usize,
    pub tietze_budget: usize,
    pub closure_bound: usize,
    /// Retry under every generator order and keep the shortest result.
    pub permute: bool,
}

impl Default for PresentOptions {
    fn default() -> Self {
        PresentOptions {
            harvest: HarvestOptions::default(),
            radius_cap: HarvestOptions::default().radius_cap,
            all_commutators: false,
            verify_m: vec![2, 3],
            prune_m: vec![2, 3, 4, 5],
            max_cosets: DEFAULT_MAX_COSETS,
            prune_max_cosets: 100_000,
            shortcuts: true,
            cycle_length: 12,
            tietze_budget: DEFAULT_BUDGET,
            closure_bound: DEFAULT_CLOSURE_BOUND,
            permute: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    Lift,
    Commutator,
    Conjugation,
    /// A harvested translation word equated with its basis-word product.
    Shortcut,
    /// A short closed walk in the Cayley graph.
    Cycle,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub step: Step,
    /// Relator before simplification.
    pub relator: String,
    /// Point-group relator it was lifted from, for lifted relators.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point_relator: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RemovalProof {
    /// Rewritten to the empty word by the remaining relators.
    Rewrite,
    /// Finite-quotient orders and the lattice index were unchanged.
    Bounded,
}

#[derive(Clone, Debug, Serialize)]
pub struct Removed {
    pub relator: String,
    pub proof: RemovalProof,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderCheck {
    pub m: usize,
    pub expected: usize,
    #[serde(flatten)]
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    /// Every relator evaluates to the identity isometry.
    pub identity: bool,
    pub order_checks: Vec<OrderCheck>,
}

impl Verification {
    pub fn all_pass(&self) -> bool {
        self.identity && self.order_checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn any_inconclusive(&self) -> bool {
        self.order_checks.iter().any(|c| c.verdict == Verdict::Inconclusive)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PresentationReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dimension: usize,
    pub generators: Vec<(String, String)>,
    /// Generator order the pipeline ran with.
    pub generator_order: String,
    pub relators: Vec<String>,
    pub total_length: usize,
    pub point_group_order: usize,
    pub point_relators: Vec<String>,
    pub lattice_rank: usize,
    pub lattice_basis: Vec<Vec<String>>,
    pub basis_words: Vec<String>,
    pub provenance: Vec<Provenance>,
    /// For each final relator, indices into `provenance`.
    pub relator_origins: Vec<Vec<usize>>,
    pub removed: Vec<Removed>,
    pub tietze_exhausted: bool,
    pub verification: Verification,
    pub options: PresentOptions,
    #[serde(skip)]
    pub presentation: Presentation,
    #[serde(skip)]
    pub basis: Vec<Word>,
}

impl PresentationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Removal test for pruning; `None` if `s` must stay.
fn removable(
    e: &ExtensionData,
    s: &Word,
    others: &[Word],
    options: &PresentOptions,
) -> Option<RemovalProof> {
    if reduce_with(s, others, options.tietze_budget).is_empty() {
        return Some(RemovalProof::Rewrite);
    }
    let p = Presentation::new(e.names.clone(), others.to_vec());
    let n = e.point_order();
    for &m in &options.prune_m {
        let expected = n.checked_mul(m.checked_pow(e.rank() as u32)?)?;
        let bound = options.prune_max_cosets.min(expected.saturating_mul(64).max(1024));
        if order_check(&p, &e.lattice_powers(m), expected, bound) != Verdict::Pass {
            return None;
        }
    }
    let bound = options.prune_max_cosets.min(n.saturating_mul(64).max(1024));
    match coset_enumerate(&p, &e.basis_words, bound).index() {
        Some(i) if i == n => Some(RemovalProof::Bounded),
        _ => None,
    }
}

fn present_once(doc: &GeneratingSetDocument, options: &PresentOptions) -> Result<PresentationReport> {
    let e = build_extension_data(doc, options)?;
    let names = &e.names;
    let mut provenance = Vec::new();
    let mut tagged: Vec<Tagged> = Vec::new();
    let mut push = |step: Step, w: Word, point: Option<&Word>| {
        provenance.push(Provenance {
            step,
            relator: format_word(&w, names),
            point_relator: point.map(|p| format_word(p, names)),
        });
        tagged.push((w, BTreeSet::from([provenance.len() - 1])));
    };
    let mut tw = TranslationWords { shortcuts: options.shortcuts, recorded: Vec::new() };
    for (r, lifted) in lift_with(&e, &mut tw)? {
        push(Step::Lift, lifted, Some(&r));
    }
    for w in commutator_relators(&e, options.all_commutators) {
        push(Step::Commutator, w, None);
    }
    for w in conjugation_with(&e, &mut tw)? {
        push(Step::Conjugation, w, None);
    }
    for w in tw.recorded {
        push(Step::Shortcut, w, None);
    }
    for w in cycle_relators(&e.group, options.cycle_length, options.tietze_budget)? {
        push(Step::Cycle, w, None);
    }
    for (w, _) in &tagged {
        if !e.evaluates_to_identity(w)? {
            return Err(Error::Verification(format!(
                "relator {} does not evaluate to the identity",
                format_word(w, names)
            )));
        }
    }
    let (mut rels, _, mut exhausted) = tietze_simplify_tagged(tagged, options.tietze_budget);
    let mut removed = Vec::new();
    let mut k = rels.len();
    while k > 0 {
        k -= 1;
        let others: Vec<Word> = rels.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, r)| r.0.clone()).collect();
        if let Some(proof) = removable(&e, &rels[k].0, &others, options) {
            removed.push(Removed { relator: format_word(&rels[k].0, names), proof });
            rels.remove(k);
        }
    }
    let (rels, _, ex2) = tietze_simplify_tagged(rels, options.tietze_budget);
    exhausted |= ex2;

    let presentation = Presentation::new(names.clone(), rels.iter().map(|r| r.0.clone()).collect());
    let verification = verify(&e, &presentation, options)?;
    if !verification.identity {
        return Err(Error::Verification("a relator does not evaluate to the identity".into()));
    }
    if let Some(c) = verification.order_checks.iter().find(|c| matches!(c.verdict, Verdict::Fail { .. })) {
        return Err(Error::Verification(format!("order check failed for m = {}", c.m)));
    }
    Ok(PresentationReport {
        label: doc.label.clone(),
        dimension: doc.dimension,
        generators: doc.generators.iter().map(|g| (g.name.to_string(), format_symop(&g.op))).collect(),
        generator_order: names.iter().collect(),
        relators: presentation.relator_texts(),
        total_length: presentation.total_length(),
        point_group_order: e.point_order(),
        point_relators: e.point_presentation.relator_texts(),
        lattice_rank: e.rank(),
        lattice_basis: e
            .harvest
            .basis
            .iter()
            .map(|t| t.vector.iter().map(format_rational).collect())
            .collect(),
        basis_words: e.basis_words.iter().map(|w| format_word(w, names)).collect(),
        provenance,
        relator_origins: rels.iter().map(|r| r.1.iter().copied().collect()).collect(),
        removed,
        tietze_exhausted: exhausted,
        verification,
        options: options.clone(),
        presentation,
        basis: e.basis_words.clone(),
    })
}

/// Identity evaluation and finite-quotient order checks.
pub fn verify(e: &ExtensionData, p: &Presentation, options: &PresentOptions) -> Result<Verification> {
    let mut identity = true;
    for r in &p.relators {
        identity &= e.evaluates_to_identity(r)?;
    }
    let order_checks = options
        .verify_m
        .par_iter()
        .map(|&m| {
            let expected = e.point_order() * m.pow(e.rank() as u32);
            OrderCheck { m, expected, verdict: order_check(p, &e.lattice_powers(m), expected, options.max_cosets) }
        })
        .collect();
    Ok(Verification { identity, order_checks })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

/// Rewrites a report from a permuted run in the document's generator order.
fn restore_order(mut report: PresentationReport, doc: &GeneratingSetDocument, order: &[usize]) -> PresentationReport {
    // permuted index j holds original generator order[j]
    let rels: Vec<(Word, Vec<usize>)> = report
        .presentation
        .relators
        .iter()
        .zip(&report.relator_origins)
        .map(|(w, o)| (canonical_relator(&w.relabel(order)), o.clone()))
        .collect();
    let mut rels = rels;
    rels.sort();
    let names = doc.names();
    report.presentation = Presentation::new(names.clone(), rels.iter().map(|r| r.0.clone()).collect());
    report.relators = report.presentation.relator_texts();
    report.relator_origins = rels.into_iter().map(|r| r.1).collect();
    report.basis = report.basis.iter().map(|w| w.relabel(order)).collect();
    report.generators = doc.generators.iter().map(|g| (g.name.to_string(), format_symop(&g.op))).collect();
    report
}

/// Runs the full pipeline and verification.
pub fn present(doc: &GeneratingSetDocument, options: &PresentOptions) -> Result<PresentationReport> {
    let mut options = options.clone();
    options.harvest.radius_cap = options.radius_cap;
    options.harvest.closure_bound = options.closure_bound;
    if !options.permute || doc.generators.len() > 6 {
        return present_once(doc, &options);
    }
    let perms = permutations(doc.generators.len());
    let runs: Vec<(Vec<usize>, Result<PresentationReport>)> = perms
        .into_par_iter()
        .map(|order| {
            let r = present_once(&doc.permuted(&order), &options).map(|r| restore_order(r, doc, &order));
            (order, r)
        })
        .collect();
    let key = |r: &PresentationReport| (r.total_length, r.relators.len());
    let best = runs
        .iter()
        .filter_map(|(o, r)| r.as_ref().ok().map(|r| (key(r), o.clone(), r)))
        .min_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    match best {
        Some((_, _, r)) => Ok(r.clone()),
        None => runs.into_iter().next().expect("at least one permutation").1,
    }
}

/// Per-relator count of its cycle's orbit per vertex, `c N_c / N_v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingCensus {
    pub relator: String,
    pub length: usize,
    /// Symmetries of the cycle among its own vertices.
    pub stabilizer: usize,
    /// Vertices per declared cell, `N_v`.
    pub vertices_per_cell: usize,
    /// Cycles of this orbit per cell, `N_c`.
    pub cycles_per_cell: usize,
    pub per_vertex: usize,
}

pub fn relator_ring_census(
    p: &Presentation,
    group: &MatrixGroup,
    point_order: usize,
    cell_order: usize,
) -> Result<Vec<RingCensus>> {
    let nv = point_order * cell_order;
    p.relators
        .iter()
        .map(|r| {
            let text = format_word(r, &p.names);
            if r.len() < 3 {
                return Err(Error::Invalid(format!("relator {text} is shorter than 3")));
            }
            let mut verts: Vec<Element> = Vec::with_capacity(r.len());
            let mut g = group.identity();
            for &l in r.letters() {
                verts.push(g.clone());
                g = group.step(&g, l)?;
            }
            if !group.is_identity(&g) {
                return Err(Error::Verification(format!("{text} is not a relator")));
            }
            let set: BTreeSet<&Element> = verts.iter().collect();
            if set.len() != verts.len() {
                return Err(Error::Invalid(format!("relator {text} does not trace a simple cycle")));
            }
            let c = verts.len();
            let edges = |vs: &[Element]| -> BTreeSet<(Element, Element)> {
                (0..c)
                    .map(|i| {
                        let (a, b) = (vs[i].clone(), vs[(i + 1) % c].clone());
                        if a <= b { (a, b) } else { (b, a) }
                    })
                    .collect()
            };
            let base_edges = edges(&verts);
            let mut stabilizer = 0;
            for p_i in &verts {
                let moved: Vec<Element> = verts.iter().map(|v| group.then(p_i, v)).collect::<Result<_>>()?;
                let moved_set: BTreeSet<&Element> = moved.iter().collect();
                if moved_set == set && edges(&moved) == base_edges {
                    stabilizer += 1;
                }
            }
            if !nv.is_multiple_of(stabilizer) || !c.is_multiple_of(stabilizer) {
                return Err(Error::NonIntegralCensus(text));
            }
            let nc = nv / stabilizer;
            Ok(RingCensus {
                relator: text,
                length: c,
                stabilizer,
                vertices_per_cell: nv,
                cycles_per_cell: nc,
                per_vertex: c * nc / nv,
            })
        })
        .collect()
}

/// Inversions through `0`, `e_i / 2` for `i < n`, and `(1, ..., 1) / 2` in dimension `n`.
pub fn ndia_generators(n: usize) -> Result<GeneratingSetDocument> {
    if n < 2 {
        return Err(Error::Invalid("n-dia needs n >= 2".into()));
    }
    let mut points: Vec<Vec<Rational>> = vec![vec![int(0); n]];
    for i in 0..n - 1 {
        let mut p = vec![int(0); n];
        p[i] = frac(1, 2);
        points.push(p);
    }
    points.push(vec![frac(1, 2); n]);
    let minus_identity: Vec<i64> = (0..n * n).map(|k| if k / n == k % n { -1 } else { 0 }).collect();
    let generators = points
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let t: Vec<Rational> = p.iter().map(|x| x * int(2)).collect();
            Ok(NamedGenerator {
                name: (b'a' + i as u8) as char,
                op: AffineIsometry::new(n, minus_identity.clone(), t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut doc = GeneratingSetDocument::new(n, generators);
    doc.label = Some(format!("{n}-dia"));
    Ok(doc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    /// Rewritten to the empty word by our relators.
    Proven,
    /// Finite quotients agree with and without the relator.
    Bounded,
    /// A quotient enumeration overflowed.
    Inconclusive,
    /// The relator does not hold or changes a quotient.
    Refuted,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsequenceCheck {
    pub relator: String,
    pub identity: bool,
    pub witness: Witness,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub order_checks: Vec<(usize, Option<usize>, Option<usize>)>,
    pub consequences: Vec<ConsequenceCheck>,
}

impl EquivalenceReport {
    pub fn orders_agree(&self) -> bool {
        self.order_checks.iter().all(|(_, a, b)| a.is_some() && a == b)
    }

    pub fn all_consequences(&self) -> bool {
        self.consequences
            .iter()
            .all(|c| c.identity && matches!(c.witness, Witness::Proven | Witness::Bounded))
    }

    pub fn any_inconclusive(&self) -> bool {
        self.consequences.iter().any(|c| c.witness == Witness::Inconclusive)
            || self.order_checks.iter().any(|(_, a, b)| a.is_none() || b.is_none())
    }

    pub fn equivalent(&self) -> bool {
        self.orders_agree() && self.all_consequences()
    }
}

pub const EQUIVALENCE_M: [usize; 3] = [2, 3, 4];
pub const EQUIVALENCE_MAX_COSETS: usize = 100_000;

/// Bounded comparison of `ours` with a reference presentation on the same generators.
pub fn check_equivalence(
    ours: &Presentation,
    reference: &Presentation,
    group: &MatrixGroup,
    basis_words: &[Word],
) -> EquivalenceReport {
    let powers = |m: usize| -> Vec<Word> { basis_words.iter().map(|y| y.pow(m as i64)).collect() };
    let order_checks = EQUIVALENCE_M
        .iter()
        .map(|&m| {
            let a = group_order(&ours.with_extra(&powers(m)), EQUIVALENCE_MAX_COSETS);
            let b = group_order(&reference.with_extra(&powers(m)), EQUIVALENCE_MAX_COSETS);
            (m, a, b)
        })
        .collect();
    let consequences = reference
        .relators
        .iter()
        .map(|r| {
            let relator = format_word(r, &reference.names);
            let identity = group.evaluate(r).map(|g| group.is_identity(&g)).unwrap_or(false);
            if !identity {
                return ConsequenceCheck { relator, identity, witness: Witness::Refuted };
            }
            if reduce_with(r, &ours.relators, DEFAULT_BUDGET).is_empty() {
                return ConsequenceCheck { relator, identity, witness: Witness::Proven };
            }
            let mut witness = Witness::Bounded;
            for &m in &EQUIVALENCE_M {
                let base = group_order(&ours.with_extra(&powers(m)), EQUIVALENCE_MAX_COSETS);
                let mut with = powers(m);
                with.push(r.clone());
                let extended = group_order(&ours.with_extra(&with), EQUIVALENCE_MAX_COSETS);
                match (base, extended) {
                    (Some(x), Some(y)) if x == y => {}
                    (Some(_), Some(_)) => {
                        witness = Witness::Refuted;
                        break;
                    }
                    _ => witness = Witness::Inconclusive,
                }
            }
            ConsequenceCheck { relator, identity, witness }
        })
        .collect();
    EquivalenceReport { order_checks, consequences }
}

/// `per_vertex` as an exact fraction, for callers that allow non-regular counts.
pub fn census_ratio(c: &RingCensus) -> Ratio<usize> {
    Ratio::new(c.length * c.cycles_per_cell, c.vertices_per_cell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symop::parse_generating_set;
    use crate::words::{parse_word, same_relator};

    fn doc(dim: usize, ops: &[(&str, &str)]) -> GeneratingSetDocument {
        let gens: Vec<String> = ops
            .iter()
            .map(|(n, x)| format!(r#"{{"name":"{n}","xyz":"{x}"}}"#))
            .collect();
        parse_generating_set(&format!(r#"{{"dimension":{dim},"generators":[{}]}}"#, gens.join(","))).unwrap()
    }

    fn i42d() -> GeneratingSetDocument {
        doc(3, &[("a", "x, 1/2-y, 1/4-z"), ("b", "1/2-x, y, -1/4-z"), ("c", "y,-x,-z")])
    }

    #[test]
    fn extension_data_for_tetragonal_group() {
        let e = build_extension_data(&i42d(), &PresentOptions::default()).unwrap();
        assert_eq!(e.point_order(), 8);
        assert_eq!(e.rank(), 3);
        let names = ['a', 'b', 'c'];
        let text: Vec<String> = e.basis_words.iter().map(|w| format_word(w, &names)).collect();
        for w in ["(ab)^2", "abc^2", "(ac)^2"] {
            let target = parse_word(w, &names).unwrap();
            let v = e.translation_of_word(&target).unwrap();
            assert!(e.lattice.contains(&v), "{w}");
        }
        assert!(e.basis_words.iter().all(|w| w.len() == 4), "{text:?}");
        for (i, y) in e.basis_words.iter().enumerate() {
            assert_eq!(e.translation_of_word(y).unwrap(), e.harvest.basis[i].vector);
        }
    }

    #[test]
    fn lifted_relators_hold() {
        let e = build_extension_data(&i42d(), &PresentOptions::default()).unwrap();
        for (_, w) in lift_point_relators(&e).unwrap() {
            assert!(e.evaluates_to_identity(&w).unwrap());
        }
        for w in conjugation_relators(&e).unwrap() {
            assert!(e.evaluates_to_identity(&w).unwrap());
        }
    }

    #[test]
    fn tetragonal_presentation() {
        let r = present(&i42d(), &PresentOptions::default()).unwrap();
        assert!(r.verification.all_pass(), "{:?}", r.verification);
        let e = build_extension_data(&i42d(), &PresentOptions::default()).unwrap();
        let reference = Presentation::parse(&['a', 'b', 'c'], &["a^2", "b^2", "c^4", "bc^-1ac", "abcabac^-1b"]).unwrap();
        let eq = check_equivalence(&r.presentation, &reference, &e.group, &e.basis_words);
        assert!(eq.equivalent(), "{eq:?} {:?}", r.relators);
        assert!(r.relator_origins.iter().all(|o| !o.is_empty()));
    }

    #[test]
    fn plane_with_diagonal_generator() {
        for n in 1..=3 {
            let d = doc(2, &[("a", "x+1,y"), ("b", "x,y+1"), ("c", &format!("x+{n},y+{n}"))]);
            let r = present(&d, &PresentOptions::default()).unwrap();
            let names = ['a', 'b', 'c'];
            let reference = Presentation::parse(&names, &["[a,b]", &format!("(ab)^{n}c^-1")]).unwrap();
            let e = build_extension_data(&d, &PresentOptions::default()).unwrap();
            assert!(check_equivalence(&r.presentation, &reference, &e.group, &e.basis_words).equivalent());
            if n == 1 {
                assert_eq!(r.presentation.relators.len(), 2, "{:?}", r.relators);
                assert!(r.presentation.relators.iter().all(|w| w.len() == 3));
            }
        }
    }

    #[test]
    fn ndia_involutions() {
        let d = ndia_generators(2).unwrap();
        let r = present(&d, &PresentOptions::default()).unwrap();
        let names = ['a', 'b', 'c'];
        let want = ["a^2", "b^2", "c^2", "(abc)^2"];
        assert_eq!(r.presentation.relators.len(), 4, "{:?}", r.relators);
        for w in want {
            let w = parse_word(w, &names).unwrap();
            assert!(r.presentation.relators.iter().any(|x| same_relator(x, &w)), "{:?}", r.relators);
        }
        assert!(ndia_generators(1).is_err());
    }

    #[test]
    fn census_of_tetragonal_relators() {
        let e = build_extension_data(&i42d(), &PresentOptions::default()).unwrap();
        let p = Presentation::parse(&['a', 'b', 'c'], &["c^4", "bc^-1ac", "abcabac^-1b"]).unwrap();
        let c = relator_ring_census(&p, &e.group, 8, 2).unwrap();
        let got: Vec<(usize, usize)> = c.iter().map(|x| (x.cycles_per_cell, x.per_vertex)).collect();
        assert_eq!(got, vec![(4, 1), (8, 2), (8, 4)]);
        let bad = Presentation::parse(&['a', 'b', 'c'], &["a^2"]).unwrap();
        assert!(relator_ring_census(&bad, &e.group, 8, 2).is_err());
    }
}
