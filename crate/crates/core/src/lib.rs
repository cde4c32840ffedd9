pub mod feature_dag;
pub mod lambda_core;
pub mod lexicon;
pub mod cham_engine;
pub mod cli;
