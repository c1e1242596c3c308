"""
Fitting a labelled CSV file
===========================

Gene-expression style data: samples as rows, a 0/1 response in the first
column.  A fitted score at or above 0.5 predicts class 1.
"""

import os
import tempfile

import numpy as np

from huberfused import HuberFusedConfig, SolverOptions, solve
from huberfused.dataset_io import Dataset, load_csv, save_csv, standardize
from huberfused.metrics import classification_metrics

rng = np.random.default_rng(4)
n, p = 72, 300
X = rng.normal(size=(n, p))
y = (X[:, 10:20].sum(axis=1) > 0).astype(float)
X[:, 0] = 1.0  # offset column; the model has no intercept

path = os.path.join(tempfile.mkdtemp(), "genes.csv")
save_csv(Dataset(X, y, feature_names=tuple("g%d" % j for j in range(p))), path)

data = load_csv(path, has_header=True)
print(data.n, "samples,", data.p, "features")

# standardizing would zero the offset column, so it is flagged as constant
print("constant columns:", standardize(data).constant_columns)

fit = solve(data.to_problem(), HuberFusedConfig(1.0, 0.005, 0.005), SolverOptions(tol=1e-5))
acc, rec = classification_metrics(data.response.astype(int), data.features @ fit.beta_hat)
print("in-sample accuracy %.3f, recall %.3f" % (acc, rec))
