from setuptools import setup, find_packages

setup(
    name="slt-solver",
    version="0.1.0",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "jsonschema>=4.20.0",
    ],
    entry_points={
        "console_scripts": [
            "slt=slt.cli:main",
        ],
    },
    python_requires=">=3.8",
    description="Shooting solver for discontinuous Sturm-Liouville problems with transmission conditions",
    long_description=open("README.md").read(),
    long_description_content_type="text/markdown",
    keywords="sturm-liouville, eigenvalues, shooting method, transmission conditions, spectral theory",
    url="",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
