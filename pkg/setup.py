from setuptools import find_packages, setup

with open("requirements.txt", encoding="utf-8") as f:
    requirements = [line.strip() for line in f if line.strip()]

setup(
    name="pressurelab",
    version="0.1.0",
    description="Thermodynamic formalism, Bowen dimension and the pressure semi-norm on quasi-Blaschke products",
    packages=find_packages(include=["src", "src.*", "config"]),
    package_data={"src": ["templates/*.jinja"]},
    python_requires=">=3.9",
    install_requires=requirements,
    entry_points={"console_scripts": ["pressurelab=src.main:main"]},
)
