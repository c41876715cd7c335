"""placepulse: predict the check-in popularity of any point on a city map.

A library plus CLI and HTTP service. Build a dataset of place profiles
(ingested or synthetic), index it spatially, extract six-chunk feature
vectors for any coordinate, train a gradient-boosted regression model on
log check-ins, and evaluate with logarithmic error metrics under k-fold
cross-validation.
"""
from .core import (
    CategoryVocabulary,
    ChunkMask,
    Dataset,
    FeatureVector,
    FoodCategoryList,
    GeoPoint,
    HotspotRadii,
    PlaceProfile,
    dataset_validate,
    log1p_score,
)
from .geo import SpatialIndex, build_index, haversine, knn, radius_query
from .ingest import (
    BoundingBox,
    SynthConfig,
    build_vocabulary,
    category_summary,
    filter_scope,
    load_dataset,
    parse_profiles,
    save_dataset,
    synth_generate,
)
from .features import FeatureConfig, apply_mask, extract_features
from .gbm import GbmConfig, GbmModel, fit, load_model, predict, save_model
from .baselines import DnnConfig, dnn_predict, mean_predict
from .evaluation import (
    EvaluationReport,
    FoldPlan,
    cross_validate,
    make_folds,
    male,
    msle,
    pcc,
    pcc_by_radius,
    ttest_ind,
    variant_sweep,
)

__version__ = "0.1.0"
