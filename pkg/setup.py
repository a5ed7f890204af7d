"""Install biblioscope package."""
from setuptools import setup, find_packages


def main():
    """Install biblioscope."""
    setup(
        name='biblioscope',
        packages=find_packages(exclude=['tests', 'tests.*']),
        include_package_data=True,
        python_requires='>=3.9',
        setup_requires=['setuptools_scm'],
        use_scm_version=True,
        install_requires=[
            "click>=8.0",
            "lxml",
            "networkx",
            "numpy",
            "pandas>=1.5",
            "Unidecode"
        ],
        package_data={"biblioscope": ["py.typed", "data/*.map"]},
        entry_points={
            'console_scripts': [
                'biblioscope = biblioscope.__main__:main'
            ]
        }
    )


if __name__ == '__main__':
    main()
