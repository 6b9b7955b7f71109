use rayon::prelude::*;

use super::features::{region_features, RegionFeatures};
use super::regions::{extract_regions, Region};
use super::saliency::{saliency_map_with, SaliencyMap, SaliencyParams};
use super::threshold::{threshold_mask, BinaryMask, ThresholdPolicy};
use crate::error::Result;
use crate::hypercube::{CubeKind, Hypercube};
use crate::image::Image;
use crate::preprocess::{first_component, joint_bilateral_filter, JbfParams, PcaModel};
use crate::scalar::Scalar;

/// Parameters of [`detect_damage`].
#[derive(Debug, Clone, PartialEq)]
pub struct DetectConfig<T> {
    /// `None` derives defaults from the PC1 guide.
    pub jbf: Option<JbfParams<T>>,
    /// Skip spatial denoising entirely.
    pub skip_jbf: bool,
    pub saliency: SaliencyParams<T>,
    pub threshold: ThresholdPolicy,
    /// Regions smaller than this are dropped.
    pub min_area: usize,
}

impl<T: Scalar> Default for DetectConfig<T> {
    fn default() -> Self {
        Self {
            jbf: None,
            skip_jbf: false,
            saliency: SaliencyParams::default(),
            threshold: ThresholdPolicy::default(),
            min_area: 5,
        }
    }
}

/// Every intermediate of one detection run.
#[derive(Debug, Clone)]
pub struct Detection<T> {
    pub denoised: Hypercube<T>,
    /// PC1 of the input cube, used as the JBF guide.
    pub guide: Image<T>,
    pub jbf_params: Option<JbfParams<T>>,
    pub pca: PcaModel<T>,
    /// PC1 of the denoised cube, the saliency input.
    pub pc1: Image<T>,
    pub saliency: SaliencyMap<T>,
    pub mask: BinaryMask,
    pub regions: Vec<Region>,
    pub features: Vec<RegionFeatures>,
}

/// PC1 of `cube` and its saliency map.
///
/// Near-constant PC1 planes, at or below `√eps · ‖mean spectrum‖`, yield an
/// empty map rather than stretched rounding noise.
pub fn pc1_saliency<T: Scalar>(
    cube: &Hypercube<T>,
    params: &SaliencyParams<T>,
) -> Result<(PcaModel<T>, Image<T>, SaliencyMap<T>)> {
    let (pca, pc1) = first_component(cube)?;
    let norm = pca.mean_spectrum.iter().fold(T::zero(), |acc, &m| acc + m * m).sqrt();
    let mut params = *params;
    params.flat_floor = params.flat_floor.max(T::epsilon().sqrt() * norm);
    let mut saliency = saliency_map_with(&pc1, &params)?;
    saliency.source = format!("pc1 of {}", cube.provenance_string());
    Ok((pca, pc1, saliency))
}

/// JBF (PC1 guide) → PCA → saliency → threshold → regions → features.
pub fn detect_damage<T: Scalar>(cube: &Hypercube<T>, config: &DetectConfig<T>) -> Result<Detection<T>> {
    cube.require_kind("detect", &[CubeKind::Reflectance, CubeKind::SnvCorrected])?;
    let (_, guide) = first_component(cube)?;
    let (denoised, jbf_params) = if config.skip_jbf {
        (cube.clone(), None)
    } else {
        let params = config.jbf.unwrap_or_else(|| JbfParams::for_guide(&guide));
        (joint_bilateral_filter(cube, &guide, &params)?, Some(params))
    };
    let (pca, pc1, saliency) = pc1_saliency(&denoised, &config.saliency)?;

    let mask = threshold_mask(&saliency, config.threshold)?;
    let regions = extract_regions(&mask.mask, config.min_area);
    let features = regions.par_iter().map(region_features).collect();
    Ok(Detection { denoised, guide, jbf_params, pca, pc1, saliency, mask, regions, features })
}
