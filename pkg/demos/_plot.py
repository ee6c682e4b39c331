"""Optional plotting helper shared by the demo scripts.

matplotlib is not a dependency of the library; when it is missing the demos
print their numbers and skip the figure.
"""

import os


def figure(name):
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return None, None
    fig, ax = plt.subplots(figsize=(7, 4))
    fig.savename = os.path.join(os.environ.get("SPINCIRC_DEMO_OUT", "."), name)
    return fig, ax


def save(fig):
    if fig is None:
        return
    fig.tight_layout()
    fig.savefig(fig.savename, dpi=120)
    print(f"wrote {fig.savename}")
