"""Function+data-flow pipelines: graphs whose edges carry datasets or learned functions.

The package is organized as:

* :mod:`fdf.graph` -- pipeline graph model, file format, and implicit typing
* :mod:`fdf.numerics` -- the operation library (standardize, PCA, MLP, score)
* :mod:`fdf.engine` -- planning, execution, artifact store, data generation
* :mod:`fdf.cli` / :mod:`fdf.service` -- command line and local HTTP front doors
"""

__version__ = "0.1.0"
