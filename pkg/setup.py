from setuptools import setup, find_packages

with open("README.md", "r", encoding="utf-8") as fh:
    long_description = fh.read()

setup(
    name="lcklab",
    version="1.0.0",
    description="Numerical verification lab for locally conformally Kähler geometry on Hopf manifolds",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(include=["lcklab", "lcklab.*"]),
    package_data={"lcklab.config": ["anchors.toml"]},
    python_requires=">=3.10",
    install_requires=[
        "torch>=2.0.0",
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pydantic>=2.5.0,<3.0.0",
        "pydantic-settings>=2.0.0",
        "python-dotenv>=0.19.0",
        "tomli>=1.1.0; python_version < '3.11'",
    ],
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=3.0.0",
            "hypothesis>=6.90.0",
            "black>=21.0",
            "isort>=5.0.0",
            "flake8>=3.9.0",
        ],
    },
    entry_points={
        "console_scripts": ["lcklab=lcklab.cli:main"],
    },
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
)
