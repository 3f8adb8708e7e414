from setuptools import setup, find_packages

setup(
    name="quasiquantal",
    version="0.1.0",
    description="phase-space, projected and wave-function mechanics with cross-checks between them",
    license="MIT",

    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"quasiquantal": ["scenarios/*.json"]},
    python_requires=">=3.9",
    install_requires=[
        "numpy",
        "scipy",
        "pandas",
        "xarray",
        "python-dotenv",
        "matplotlib",
    ],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["quasiquantal = quasiquantal.cli:main"]},
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
    ],
)
