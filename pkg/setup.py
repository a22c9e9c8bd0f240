from setuptools import setup
from setuptools import find_packages

packages = find_packages(exclude=("tests", "tests.*"))
setup(
    name="spamhunter",
    version="0.1.0",
    packages=packages,
    package_data={"": ["**/*.txt"]},
    include_package_data=True,
    url="",
    license="",
    description="Detection of evasive Twitter spammers and their social neighborhoods",
    zip_safe=False,
    python_requires=">=3.8",
    install_requires=[
        "joblib",
        "networkx",
        "numpy",
        "pandas",
        "python-dateutil",
        "requests",
        "scikit-learn",
        "scipy",
        "tqdm",
        "Levenshtein>=0.20",
        "jsonargparse[signatures]>=4.17.0",
        "omegaconf",
    ],
    extras_require={"dev": ["black", "isort", "pre-commit", "pytest"]},
    entry_points={"console_scripts": ["spamhunter=spamhunter.cli:cli"]},
)
