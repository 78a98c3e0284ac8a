//! Linear soft-margin SVM trained by dual coordinate descent, and
//! leave-one-out cross-validation over a feature matrix.

mod cv;
mod file;
mod train;

pub use cv::{loocv, CvOptions, CvReport, FoldResult, LooCv};
pub use file::{load_model, read_model, save_model, write_model, MODEL_MAGIC, MODEL_VERSION};
pub use train::{encode_labels, predict, train, LinearSvmModel, Prediction, SvmParams, TrainDiagnostics, DEFAULT_C};
